//! Zero-table ingestion and the truncation bounds for the sum over zeros.
//!
//! Zero ordinates arrive as decimal (or 64.64 fixed-point) values with a
//! declared absolute accuracy; each becomes an interval inflated by that
//! accuracy. The counting function N(t) is enclosed by the Rosser envelope,
//! which also certifies exponents α with t^α ≥ N(t) beyond a height, feeding
//! the E1/E2 tail bounds.

use crate::error::{Error, Result};
use crate::mellin::{self, MellinContext};
use rint::{ComplexInterval, Precision, RealInterval};
use rug::{Float, Integer};
use std::io::{BufRead, Read, Write};
use std::path::Path;

#[derive(Debug, Clone)]
pub struct ZeroRecord {
    pub ordinate: RealInterval,
    pub index: usize,
}

#[derive(Debug, Clone)]
enum Raw {
    Text(String),
    Fixed(u64, u64),
}

pub struct ZeroTable {
    pub abs_err: Float,
    pub rh_height: f64,
    pub records: Vec<ZeroRecord>,
    raws: Vec<Raw>,
    abs_err_text: String,
    rh_height_text: String,
    binary: bool,
}

const HEADER_PREFIX: &str = "# zeta-zeros v1";

impl ZeroTable {
    pub fn count(&self) -> usize {
        self.records.len()
    }

    pub fn max_height(&self) -> f64 {
        self.records
            .last()
            .map(|r| r.ordinate.hi().to_f64())
            .unwrap_or(0.0)
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    /// Number of ordinates whose interval starts below `t` (every zero with
    /// true ordinate < t is counted; boundary-straddling records included).
    pub fn count_below(&self, t: f64) -> usize {
        self.records
            .iter()
            .take_while(|r| r.ordinate.lo().to_f64() < t)
            .count()
    }

    pub fn load(path: &Path, prec: Precision) -> Result<ZeroTable> {
        let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut header = String::new();
        file.read_line(&mut header)?;
        let header_line = header.trim_end_matches('\n').to_string();
        let (abs_err_text, rh_height_text, binary) = parse_header(&header_line)?;
        let abs_err = parse_float_upper(&abs_err_text, prec)?;
        let rh_height: f64 = rh_height_text
            .parse()
            .map_err(|_| Error::Format("unparsable rh_height".into()))?;

        let mut raws = Vec::new();
        let mut records = Vec::new();
        if binary {
            let mut buf = Vec::new();
            file.read_to_end(&mut buf)?;
            if buf.len() % 16 != 0 {
                return Err(Error::Format("binary payload not a multiple of 16 bytes".into()));
            }
            for (index, chunk) in buf.chunks_exact(16).enumerate() {
                let int_part = u64::from_le_bytes(chunk[0..8].try_into().unwrap());
                let frac = u64::from_le_bytes(chunk[8..16].try_into().unwrap());
                let v = (Integer::from(int_part) << 64u32) + Integer::from(frac);
                let exact = Float::with_val(prec.bits(), v) >> 64i32;
                records.push(build_record(
                    RealInterval::point(exact),
                    &abs_err,
                    index,
                )?);
                raws.push(Raw::Fixed(int_part, frac));
            }
        } else {
            for (index, line) in file.lines().enumerate() {
                let line = line?;
                let trimmed = line.trim();
                if trimmed.is_empty() {
                    continue;
                }
                let base = RealInterval::from_decimal(trimmed, prec)
                    .map_err(|_| Error::Format(format!("bad ordinate on line {}", index + 2)))?;
                records.push(build_record(base, &abs_err, records.len())?);
                raws.push(Raw::Text(trimmed.to_string()));
            }
        }

        // Strict monotonicity after inflation.
        for i in 1..records.len() {
            if !(records[i - 1].ordinate.hi() < records[i].ordinate.lo()) {
                return Err(Error::MonotonicityViolation { index: i });
            }
        }

        Ok(ZeroTable {
            abs_err,
            rh_height,
            records,
            raws,
            abs_err_text,
            rh_height_text,
            binary,
        })
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        let fmt = if self.binary { " format=binary" } else { "" };
        writeln!(
            out,
            "{} abs_err={} rh_height={}{}",
            HEADER_PREFIX, self.abs_err_text, self.rh_height_text, fmt
        )?;
        for raw in &self.raws {
            match raw {
                Raw::Text(s) => writeln!(out, "{}", s)?,
                Raw::Fixed(i, f) => {
                    out.write_all(&i.to_le_bytes())?;
                    out.write_all(&f.to_le_bytes())?;
                }
            }
        }
        Ok(())
    }

    /// Builds a fresh table from located ordinates (used by the scanner).
    pub fn from_ordinates(
        ordinates: &[RealInterval],
        abs_err_text: &str,
        rh_height_text: &str,
        binary: bool,
        prec: Precision,
    ) -> Result<ZeroTable> {
        let abs_err = parse_float_upper(abs_err_text, prec)?;
        let mut records = Vec::new();
        let mut raws = Vec::new();
        for (index, o) in ordinates.iter().enumerate() {
            if binary {
                let mid = o.mid();
                let scaled = Float::with_val(prec.bits() + 64, &mid) << 64i32;
                let v = scaled.to_integer().ok_or_else(|| {
                    Error::Format("ordinate not representable in 64.64 fixed point".into())
                })?;
                let frac = Integer::from(&v & Integer::from(u64::MAX)).to_u64().unwrap();
                let int_part = Integer::from(&v >> 64u32)
                    .to_u64()
                    .ok_or_else(|| Error::Format("ordinate exceeds 64-bit integer part".into()))?;
                let exact = Float::with_val(prec.bits(), v) >> 64i32;
                records.push(build_record(RealInterval::point(exact), &abs_err, index)?);
                raws.push(Raw::Fixed(int_part, frac));
            } else {
                let text = rint::real::exact_decimal(&o.mid());
                let base = RealInterval::from_decimal(&text, prec)
                    .map_err(|_| Error::Format("generated ordinate unparsable".into()))?;
                records.push(build_record(base, &abs_err, index)?);
                raws.push(Raw::Text(text));
            }
        }
        let rh_height: f64 = rh_height_text
            .parse()
            .map_err(|_| Error::Format("unparsable rh_height".into()))?;
        for i in 1..records.len() {
            if !(records[i - 1].ordinate.hi() < records[i].ordinate.lo()) {
                return Err(Error::MonotonicityViolation { index: i });
            }
        }
        Ok(ZeroTable {
            abs_err,
            rh_height,
            records,
            raws,
            abs_err_text: abs_err_text.to_string(),
            rh_height_text: rh_height_text.to_string(),
            binary,
        })
    }
}

fn build_record(base: RealInterval, abs_err: &Float, index: usize) -> Result<ZeroRecord> {
    let prec = base.prec();
    let err = RealInterval::new(
        {
            let mut f = abs_err.clone();
            rug::ops::NegAssign::neg_assign(&mut f);
            f
        },
        abs_err.clone(),
    );
    let ordinate = base.add(&err);
    // Width must stay within the declared accuracy (2·abs_err plus parsing
    // rounding slack).
    let mut allowance = Float::with_val(prec.bits(), abs_err) << 1i32;
    allowance *= Float::with_val(32, 1.001);
    allowance += Float::with_val(prec.bits(), 1) >> (prec.bits() as i32 - 8);
    if ordinate.width() > allowance {
        return Err(Error::AccuracyViolation { index });
    }
    Ok(ZeroRecord { ordinate, index })
}

fn parse_header(line: &str) -> Result<(String, String, bool)> {
    if !line.starts_with(HEADER_PREFIX) {
        return Err(Error::Format(format!(
            "expected header starting with '{}'",
            HEADER_PREFIX
        )));
    }
    let mut abs_err = None;
    let mut rh_height = None;
    let mut binary = false;
    for token in line[HEADER_PREFIX.len()..].split_whitespace() {
        if let Some(v) = token.strip_prefix("abs_err=") {
            abs_err = Some(v.to_string());
        } else if let Some(v) = token.strip_prefix("rh_height=") {
            rh_height = Some(v.to_string());
        } else if token == "format=binary" {
            binary = true;
        } else {
            return Err(Error::Format(format!("unknown header token '{}'", token)));
        }
    }
    match (abs_err, rh_height) {
        (Some(a), Some(r)) => Ok((a, r, binary)),
        _ => Err(Error::Format("header must declare abs_err and rh_height".into())),
    }
}

fn parse_float_upper(s: &str, prec: Precision) -> Result<Float> {
    let parsed = Float::parse(s).map_err(|_| Error::Format(format!("bad decimal '{}'", s)))?;
    let mut f = Float::new(prec.bits());
    rug::ops::AssignRound::assign_round(&mut f, parsed, rug::float::Round::Up);
    if !(f >= 0) {
        return Err(Error::Format("abs_err must be nonnegative".into()));
    }
    Ok(f)
}

/// Rosser envelope: N(t) ∈ [main − Q, main + Q] with
/// main = (t/2π) log(t/2πe) + 7/8 and
/// Q = 0.137 log t + 0.443 log log t + 1.588, for t ≥ 2.
pub fn nt_bound(t: &RealInterval) -> Result<(RealInterval, RealInterval)> {
    if !(t.lo() >= &2u32) {
        return Err(rint::Error::Domain("counting envelope needs t ≥ 2").into());
    }
    let prec = t.prec();
    let two_pi = RealInterval::pi(prec).mul_2exp(1);
    let e = RealInterval::one(prec).exp();
    let main = t
        .div(&two_pi)?
        .mul(&t.div(&two_pi.mul(&e))?.ln()?)
        .add(&RealInterval::from_decimal("0.875", prec)?);
    let ln_t = t.ln()?;
    let q = RealInterval::from_decimal("0.137", prec)?
        .mul(&ln_t)
        .add(&RealInterval::from_decimal("0.443", prec)?.mul(&ln_t.ln()?))
        .add(&RealInterval::from_decimal("1.588", prec)?);
    Ok((main.sub(&q), main.add(&q)))
}

/// Smallest grid-searched α with t^α ≥ N(t) certified for all t ≥ T.
///
/// Certification: N_upper(t) ≤ (t/2π) log t for t ≥ 8 (endpoint check at 8
/// plus the derivative comparison 0.137/t + 0.443/(t log t) ≤ log(2πe)/2π,
/// both interval-verified; the left side decreases in t). Then
/// f(t) = t^{α−1} − log(t)/2π is nonnegative at T' = max(T, 8) and
/// nondecreasing beyond it whenever (α−1) T'^{α−1} ≥ 1/2π. For T < 8 the
/// strip [T, 8] is covered by T^α ≥ sup of the envelope over [T, 8].
pub fn alpha_for(t_from: f64) -> f64 {
    assert!(t_from >= 2.0, "alpha_for needs T ≥ 2");
    let prec = Precision::default();
    let two_pi = RealInterval::pi(prec).mul_2exp(1);

    // One-time facts for the t ≥ 8 regime.
    let eight = RealInterval::from_u64(8, prec);
    let (_, env8) = nt_bound(&eight).expect("8 ≥ 2");
    let lin8 = eight
        .div(&two_pi)
        .unwrap()
        .mul(&eight.ln().unwrap());
    assert!(
        env8.hi() < lin8.lo(),
        "envelope must sit below (t/2π)log t at t = 8"
    );
    let deriv_lhs = RealInterval::from_decimal("0.137", prec)
        .unwrap()
        .div(&eight)
        .unwrap()
        .add(
            &RealInterval::from_decimal("0.443", prec)
                .unwrap()
                .div(&eight.mul(&eight.ln().unwrap()))
                .unwrap(),
        );
    let deriv_rhs = two_pi
        .mul(&RealInterval::one(prec).exp())
        .ln()
        .unwrap()
        .div(&two_pi)
        .unwrap();
    assert!(deriv_lhs.hi() < deriv_rhs.lo(), "derivative comparison at 8");

    let t_prime = t_from.max(8.0);
    let tp = RealInterval::from_f64(t_prime, prec);
    let ln_tp = tp.ln().unwrap();
    let inv_two_pi = two_pi.recip().unwrap();

    // Envelope supremum over [T, 8] when needed.
    let strip_sup = if t_from < 8.0 {
        let strip = RealInterval::from_f64(t_from, prec).hull(&eight);
        let (_, upper) = nt_bound(&strip).expect("T ≥ 2");
        Some(upper)
    } else {
        None
    };

    for k in 1..=512u32 {
        let alpha = 1.0 + k as f64 / 256.0;
        let a_minus_1 = RealInterval::from_f64(alpha - 1.0, prec);
        let tp_pow = a_minus_1.mul(&ln_tp).exp(); // T'^{α−1}
        let cond2 = tp_pow.lo() > ln_tp.mul(&inv_two_pi).hi();
        let cond3 = a_minus_1.mul(&tp_pow).lo() > inv_two_pi.hi();
        let cond4 = match &strip_sup {
            None => true,
            Some(upper) => {
                let t_pow = RealInterval::from_f64(alpha, prec)
                    .mul(&RealInterval::from_f64(t_from, prec).ln().unwrap())
                    .exp();
                t_pow.lo() > upper.hi()
            }
        };
        if cond2 && cond3 && cond4 {
            return alpha;
        }
    }
    panic!("no α ≤ 3 certified; T = {t_from}");
}

/// B(σ, T) = exp(λ²(1−T²)/2) [x^σ/(T log x) + 1/(λ²T²x)], the bound for
/// |Re Φ̂(σ + iT)|.
pub fn b_bound(sigma: &RealInterval, t: &RealInterval, ctx: &MellinContext) -> Result<RealInterval> {
    if !t.is_pos() {
        return Err(rint::Error::Domain("B(σ,T) needs T > 0").into());
    }
    let prec = ctx.prec();
    let one = RealInterval::one(prec);
    let lam_sq = ctx.lambda().square();
    let gauss = one.sub(&t.square()).mul(&lam_sq).mul_2exp(-1).exp();
    let x_sig = sigma.mul(ctx.log_x()).exp();
    let term1 = x_sig.div(&t.mul(ctx.log_x()))?;
    let term2 = lam_sq.mul(&t.square()).mul(ctx.x()).recip()?;
    Ok(gauss.mul(&term1.add(&term2)))
}

#[derive(Debug, Clone, Copy)]
pub struct TruncationBudget {
    pub t1: f64,
    pub t2: f64,
    pub alpha_t1: f64,
    pub alpha_t2: f64,
}

impl TruncationBudget {
    pub fn new(t1: f64, t2: f64) -> Self {
        assert!(2.0 <= t1 && t1 <= t2, "need 2 ≤ T1 ≤ T2");
        TruncationBudget {
            t1,
            t2,
            alpha_t1: alpha_for(t1),
            alpha_t2: alpha_for(t2),
        }
    }
}

fn check_count_in_envelope(count: u64, t: f64, prec: Precision) -> Result<()> {
    let ti = RealInterval::from_f64(t, prec);
    let (lower, upper) = nt_bound(&ti)?;
    let c = count as f64;
    if c < lower.lo().to_f64() || c > upper.hi().to_f64() {
        return Err(Error::InconsistentCount {
            count,
            lo: lower.lo().to_f64(),
            hi: upper.hi().to_f64(),
            t,
        });
    }
    Ok(())
}

/// Tail sum bound: Σ_{Im ρ ≥ T} B(σ, Im ρ) with the N(t) ≤ t^α majorization,
/// shared body of the E1/E2 lemmas:
/// exp(λ²(1−T²)/2) · bracket_terms · [(λ²T²+2)/(λ²T^{2−α}) − N(T)].
fn tail_common(
    t: f64,
    alpha: f64,
    n_t: u64,
    bracket: &RealInterval,
    ctx: &MellinContext,
) -> Result<RealInterval> {
    let prec = ctx.prec();
    let one = RealInterval::one(prec);
    let ti = RealInterval::from_f64(t, prec);
    let lam_sq = ctx.lambda().square();
    let gauss = one.sub(&ti.square()).mul(&lam_sq).mul_2exp(-1).exp();
    let t_pow = RealInterval::from_f64(2.0 - alpha, prec)
        .mul(&ti.ln()?)
        .exp();
    let zero_term = lam_sq
        .mul(&ti.square())
        .add(&RealInterval::from_u64(2, prec))
        .div(&lam_sq.mul(&t_pow))?
        .sub(&RealInterval::from_u64(n_t, prec));
    Ok(gauss.mul(bracket).mul(&zero_term))
}

/// |E1| bound: zeros with ordinates in [T1, T2] (real part ½), factor 2 for
/// the conjugates.
pub fn e1_bound(budget: &TruncationBudget, n_t1: u64, ctx: &MellinContext) -> Result<RealInterval> {
    let prec = ctx.prec();
    check_count_in_envelope(n_t1, budget.t1, prec)?;
    let ti = RealInterval::from_f64(budget.t1, prec);
    let sqrt_x = ctx.x().sqrt()?;
    let bracket = sqrt_x
        .div(&ti.mul(ctx.log_x()))?
        .add(&ctx.lambda().square().mul(&ti.square()).mul(ctx.x()).recip()?);
    Ok(tail_common(budget.t1, budget.alpha_t1, n_t1, &bracket, ctx)?.mul_2exp(1))
}

/// |E2| bound: zeros above T2 with unknown real part (worst case near 1).
pub fn e2_bound(budget: &TruncationBudget, n_t2: u64, ctx: &MellinContext) -> Result<RealInterval> {
    let prec = ctx.prec();
    check_count_in_envelope(n_t2, budget.t2, prec)?;
    let ti = RealInterval::from_f64(budget.t2, prec);
    let x_plus_1 = ctx.x().add(&RealInterval::one(prec));
    let bracket = x_plus_1.div(&ti.mul(ctx.log_x()))?.add(
        &ctx.lambda()
            .square()
            .mul(&ti.square())
            .mul(ctx.x())
            .recip()?
            .mul_2exp(1),
    );
    tail_common(budget.t2, budget.alpha_t2, n_t2, &bracket, ctx)
}

/// Σ_{0 < γ ≤ T1} 2 Re Φ̂(½ + iγ) over the table (conjugate pairs give the
/// factor 2). Returns the enclosure and the count actually summed; E1/E2 are
/// charged by the caller.
pub fn sum_re_phihat(
    table: &ZeroTable,
    budget: &TruncationBudget,
    ctx: &MellinContext,
) -> Result<(RealInterval, u64)> {
    let prec = ctx.prec();
    if table.max_height() < budget.t1 {
        return Err(Error::CoverageGap {
            have: table.max_height(),
            need: budget.t1,
        });
    }
    let n = table.count_below(budget.t1);
    let heights: Vec<RealInterval> = table.records[..n]
        .iter()
        .map(|r| r.ordinate.clone())
        .collect();
    let anchor = heights
        .last()
        .map(|h| h.hi().to_f64())
        .unwrap_or(budget.t1)
        .max(budget.t1);
    let half = RealInterval::from_decimal("0.5", prec)?;
    let vals = mellin::re_phihat_line(&half, &heights, ctx, anchor)?;
    let mut sum = RealInterval::zero(prec);
    for v in &vals {
        sum = sum.add(&v.mul_2exp(1));
    }
    Ok((sum, n as u64))
}

/// Re Φ̂(σ + it) for a single point height, used by oracles and the scanner.
pub fn re_phihat_at(
    sigma: &RealInterval,
    t: f64,
    ctx: &MellinContext,
    anchor_t: f64,
) -> Result<RealInterval> {
    let h = RealInterval::from_f64(t, ctx.prec());
    let vals = mellin::re_phihat_line(sigma, &[h], ctx, anchor_t)?;
    Ok(vals.into_iter().next().unwrap())
}

/// Conjugate-symmetric φ̂ magnitude on the half line, used in tests.
pub fn phihat_half_line(t: f64, ctx: &MellinContext) -> Result<ComplexInterval> {
    let prec = ctx.prec();
    let s = ComplexInterval::new(
        RealInterval::from_decimal("0.5", prec)?,
        RealInterval::from_f64(t, prec),
    );
    mellin::phihat(&s, ctx)
}

//! Galway's Mellin pair and the antiderivative Φ̂ along vertical lines.
//!
//! φ̂(s) = x^s exp(λ²s²/2)/s and φ(t) = ½ erfc(log(t/x)/(√2 λ)). Re Φ̂ is
//! evaluated by anchoring at a high ordinate where |Re Φ̂| ≤ B(σ, T) and
//! stepping downward, subtracting analytically integrated Taylor steps:
//! within a step centered at s0, φ̂(s0+ih) factors into φ̂(s0) · e^{ihω} ·
//! e^{−λ²h²/2} / (1 + ih/s0) with ω = s0λ² + log x, and the last two factors
//! are expanded as truncated series with explicit remainders, so the
//! oscillatory integral reduces to closed forms ∫ hⁿ e^{ihω} dh.

use crate::error::{Error, Result};
use crate::zeros;
use rint::complex::cpow;
use rint::{ComplexInterval, Precision, RealInterval};
use rug::Float;

/// Target for the per-step relative series remainder. Each zero enclosure
/// below a step inherits the step's charge, so the walk keeps steps far
/// tighter than the final budget; see the stepping notes on `walk_line`.
const STEP_REL_TARGET: f64 = 1e-12;

/// Default series order N (both truncated factors use degree N; the product
/// has degree 2N).
pub const DEFAULT_STEP_ORDER: usize = 16;

#[derive(Clone)]
pub struct MellinContext {
    x: RealInterval,
    lambda: RealInterval,
    log_x: RealInterval,
    prec: Precision,
}

impl MellinContext {
    pub fn new(x: u64, lambda_mantissa: i64, lambda_exp: i32, prec: Precision) -> Result<Self> {
        let x = RealInterval::from_u64(x, prec);
        let lambda = RealInterval::from_dyadic(lambda_mantissa, lambda_exp, prec);
        Self::from_intervals(x, lambda)
    }

    pub fn from_intervals(x: RealInterval, lambda: RealInterval) -> Result<Self> {
        if !lambda.is_pos() {
            return Err(rint::Error::Domain("lambda must be positive").into());
        }
        if !(x.lo() > &1u32) {
            return Err(rint::Error::Domain("x must exceed 1").into());
        }
        let prec = x.prec();
        let log_x = x.ln()?;
        Ok(MellinContext {
            x,
            lambda,
            log_x,
            prec,
        })
    }

    pub fn x(&self) -> &RealInterval {
        &self.x
    }

    pub fn lambda(&self) -> &RealInterval {
        &self.lambda
    }

    pub fn log_x(&self) -> &RealInterval {
        &self.log_x
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }
}

/// φ(t) = ½ erfc(log(t/x) / (√2 λ)), clamped to its range [0, 1].
pub fn phi(t: &RealInterval, ctx: &MellinContext) -> Result<RealInterval> {
    if !t.is_pos() {
        return Err(rint::Error::Domain("phi requires t > 0").into());
    }
    let arg = t
        .div(&ctx.x)?
        .ln()?
        .div(&sqrt2(ctx.prec).mul(&ctx.lambda))?;
    let val = arg.erfc().mul_2exp(-1);
    let unit = RealInterval::zero(ctx.prec).hull(&RealInterval::one(ctx.prec));
    Ok(val.intersect(&unit).unwrap_or(unit))
}

fn sqrt2(prec: Precision) -> RealInterval {
    RealInterval::from_u64(2, prec).sqrt().expect("2 ≥ 0")
}

/// φ and its first three derivatives at `t`, plus the data the sieve needs
/// for the degree-4 remainder. All formulas are elementary in
/// u = log(t/x)/λ and E = e^{−u²/2}:
///   φ′  = −c E / t
///   φ″  =  c E (1 + u/λ) / t²
///   φ‴  =  c E ((1−u²)/λ² − 3u/λ − 2) / t³
///   φ⁗  =  c E (−(u/λ + 3) P + P′/λ) / t⁴,  P = (1−u²)/λ² − 3u/λ − 2
/// with c = 1/(√(2π) λ).
pub struct PhiDerivatives {
    pub phi: RealInterval,
    pub d1: RealInterval,
    pub d2: RealInterval,
    pub d3: RealInterval,
    pub d4: RealInterval,
}

pub fn phi_derivatives(t: &RealInterval, ctx: &MellinContext) -> Result<PhiDerivatives> {
    if !t.is_pos() {
        return Err(rint::Error::Domain("phi derivatives require t > 0").into());
    }
    let prec = ctx.prec;
    let two_pi = RealInterval::pi(prec).mul_2exp(1);
    let c = two_pi.sqrt()?.mul(&ctx.lambda).recip()?;
    let u = t.div(&ctx.x)?.ln()?.div(&ctx.lambda)?;
    let e = u.square().mul_2exp(-1).neg().exp();
    let ce = c.mul(&e);
    let inv_t = t.recip()?;
    let inv_l = ctx.lambda.recip()?;
    let one = RealInterval::one(prec);

    let d1 = ce.mul(&inv_t).neg();
    let u_over_l = u.mul(&inv_l);
    let d2 = ce.mul(&one.add(&u_over_l)).mul(&inv_t.square());
    let p = one
        .sub(&u.square())
        .mul(&inv_l.square())
        .sub(&u_over_l.mul(&RealInterval::from_u64(3, prec)))
        .sub(&RealInterval::from_u64(2, prec));
    let d3 = ce.mul(&p).mul(&inv_t.powi(3));
    let p_prime_over_l = u
        .mul(&inv_l.powi(3))
        .mul_2exp(1)
        .neg()
        .sub(&inv_l.square().mul(&RealInterval::from_u64(3, prec)));
    let d4 = ce
        .mul(
            &u_over_l
                .add(&RealInterval::from_u64(3, prec))
                .neg()
                .mul(&p)
                .add(&p_prime_over_l),
        )
        .mul(&inv_t.powi(4));

    Ok(PhiDerivatives {
        phi: phi(t, ctx)?,
        d1,
        d2,
        d3,
        d4,
    })
}

/// φ̂(s) = x^s exp(λ²s²/2)/s.
pub fn phihat(s: &ComplexInterval, ctx: &MellinContext) -> Result<ComplexInterval> {
    if s.contains_zero() {
        return Err(rint::Error::PoleProximity.into());
    }
    let xs = cpow(&ctx.x, s)?;
    let gauss = s
        .square()
        .mul_real(&ctx.lambda.square())
        .mul_real(&RealInterval::from_f64(0.5, ctx.prec))
        .exp();
    xs.mul(&gauss).div(s).map_err(Into::into)
}

/// φ̂(s0 + ih) through the shift factorization
/// φ̂(s0) e^{ih(s0λ² + log x)} e^{−λ²h²/2} / (1 + ih/s0).
pub fn shift_factorization(
    s0: &ComplexInterval,
    h: &RealInterval,
    ctx: &MellinContext,
) -> Result<ComplexInterval> {
    if s0.re.contains_zero() {
        return Err(rint::Error::Domain("shift factorization requires Re s0 ≠ 0").into());
    }
    let base = phihat(s0, ctx)?;
    let omega = s0.mul_real(&ctx.lambda.square()).add(&ComplexInterval::from_real(ctx.log_x.clone()));
    let osc = omega.mul_real(h).mul_i().exp();
    let gauss = ComplexInterval::from_real(
        ctx.lambda.mul(h).square().mul_2exp(-1).neg().exp(),
    );
    let denom = ComplexInterval::one(ctx.prec).add(
        &ComplexInterval::new(RealInterval::zero(ctx.prec), h.clone()).div(s0)?,
    );
    base.mul(&osc).mul(&gauss).div(&denom).map_err(Into::into)
}

/// Truncated-series step polynomial around `s0`.
///
/// `coeffs[m]` encloses the coefficient of `h^m` in the degree-2N product of
/// the two truncated factors (so `coeffs[0]` encloses 1); `remainder` bounds
/// the combined truncation error of the product, relative to `φ̂(s0)`.
pub struct StepPolynomial {
    pub coeffs: Vec<ComplexInterval>,
    pub s0: ComplexInterval,
    pub radius: Float,
    pub remainder: RealInterval,
    pub phihat_s0: ComplexInterval,
    pub omega: ComplexInterval,
}

/// Gaussian-factor truncation bound (λh < 1): (λ²h²/2)^{N/2} / (N/2)!.
pub fn e_a_bound(lambda_h: &RealInterval, n: usize) -> RealInterval {
    let prec = lambda_h.prec();
    let half_sq = lambda_h.square().mul_2exp(-1);
    let mut b = half_sq.powi((n / 2) as u32);
    let mut fact = RealInterval::one(prec);
    for k in 2..=(n / 2) {
        fact = fact.mul(&RealInterval::from_u64(k as u64, prec));
    }
    b = b.div(&fact).expect("factorial > 0");
    RealInterval::new(Float::new(prec.bits()), b.mag())
}

/// Geometric-factor truncation bound (R = |h/s0| < 1): R^N / (1 − R).
pub fn e_b_bound(ratio: &RealInterval, n: usize) -> RealInterval {
    let prec = ratio.prec();
    let one = RealInterval::one(prec);
    let b = ratio
        .powi(n as u32)
        .div(&one.sub(ratio))
        .expect("R < 1 checked by caller");
    RealInterval::new(Float::new(prec.bits()), b.mag())
}

pub fn build_step_polynomial(
    s0: &ComplexInterval,
    radius: &Float,
    n: usize,
    ctx: &MellinContext,
) -> Result<StepPolynomial> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::RadiusTooLarge("series order N must be even and positive"));
    }
    let prec = ctx.prec;
    let r_iv = RealInterval::point(radius.clone());
    let lambda_r = ctx.lambda.mul(&r_iv);
    if !(lambda_r.mag() < 1) {
        return Err(Error::RadiusTooLarge("λ·radius must be below 1"));
    }
    let abs_s0 = s0.abs();
    if !(r_iv.mag() < *abs_s0.lo()) {
        return Err(Error::RadiusTooLarge("radius must stay below |s0|"));
    }

    // Factor A: e^{−λ²h²/2} = Σ (−1)^k/k! (λ²h²/2)^k + E_A, even powers.
    let lam_sq_half = ctx.lambda.square().mul_2exp(-1);
    let mut a_coeffs = vec![RealInterval::zero(prec); n + 1];
    let mut term = RealInterval::one(prec);
    a_coeffs[0] = term.clone();
    for k in 1..=(n / 2) {
        term = term
            .mul(&lam_sq_half)
            .div(&RealInterval::from_u64(k as u64, prec))?
            .neg();
        a_coeffs[2 * k] = term.clone();
    }

    // Factor B: (1 + ih/s0)^{-1} = Σ (−ih/s0)^k + E_B.
    let q = s0.recip()?.mul_i().neg();
    let mut b_coeffs = Vec::with_capacity(n + 1);
    let mut bq = ComplexInterval::one(prec);
    b_coeffs.push(bq.clone());
    for _ in 1..=n {
        bq = bq.mul(&q);
        b_coeffs.push(bq.clone());
    }

    // Product, degree 2N.
    let mut coeffs = vec![ComplexInterval::zero(prec); 2 * n + 1];
    for (ai, ac) in a_coeffs.iter().enumerate() {
        if ai % 2 != 0 && ai != 0 {
            continue;
        }
        for (bi, bc) in b_coeffs.iter().enumerate() {
            let c = bc.mul_real(ac);
            coeffs[ai + bi] = coeffs[ai + bi].add(&c);
        }
    }

    // Combined remainder, relative to φ̂(s0):
    // (P_A + E_A)(P_B + E_B) − P_A P_B = P_A E_B + E_A P_B + E_A E_B with
    // |P_A| ≤ e^{λ²r²/2} and |P_B| ≤ Σ R^k ≤ 1/(1−R).
    let ea = e_a_bound(&lambda_r, n);
    let ratio = r_iv.div(&abs_s0)?;
    let ratio_hi = RealInterval::new(Float::new(prec.bits()), ratio.mag());
    let eb = e_b_bound(&ratio_hi, n);
    let bound_a = lambda_r.square().mul_2exp(-1).exp();
    let bound_b = RealInterval::one(prec).sub(&ratio_hi).recip()?;
    let rem = ea
        .mul(&bound_b)
        .add(&eb.mul(&bound_a))
        .add(&ea.mul(&eb));
    let remainder = RealInterval::new(Float::new(prec.bits()), rem.mag());

    let omega = s0
        .mul_real(&ctx.lambda.square())
        .add(&ComplexInterval::from_real(ctx.log_x.clone()));
    let phihat_s0 = phihat(s0, ctx)?;

    Ok(StepPolynomial {
        coeffs,
        s0: s0.clone(),
        radius: radius.clone(),
        remainder,
        phihat_s0,
        omega,
    })
}

/// Encloses ∫_{h0}^{h1} φ̂(s0 + ih) · i dh for offsets inside the step's
/// validity disc. `h0`, `h1` may be intervals (zero ordinates carry widths).
pub fn integrate_step(
    poly: &StepPolynomial,
    h0: &RealInterval,
    h1: &RealInterval,
    ctx: &MellinContext,
) -> Result<ComplexInterval> {
    let prec = ctx.prec;
    let r = RealInterval::point(poly.radius.clone());
    if !(h0.mag() <= *r.hi()) || !(h1.mag() <= *r.hi()) {
        return Err(Error::RadiusTooLarge("integration span leaves the step disc"));
    }

    // I_m = ∫ h^m e^{ihω} dh by upward recurrence:
    // I_m = (h1^m e^{ih1ω} − h0^m e^{ih0ω} − m I_{m−1}) / (iω)
    let iw = poly.omega.mul_i();
    let inv_iw = iw.recip()?;
    let e1 = iw.mul_real(h1).exp();
    let e0 = iw.mul_real(h0).exp();
    let degree = poly.coeffs.len() - 1;

    let mut acc = ComplexInterval::zero(prec);
    let mut i_prev = e1.sub(&e0).mul(&inv_iw);
    acc = acc.add(&poly.coeffs[0].mul(&i_prev));
    let mut h0_pow = h0.clone();
    let mut h1_pow = h1.clone();
    for m in 1..=degree {
        let boundary = e1.mul_real(&h1_pow).sub(&e0.mul_real(&h0_pow));
        let i_m = boundary
            .sub(&i_prev.mul_real(&RealInterval::from_u64(m as u64, prec)))
            .mul(&inv_iw);
        acc = acc.add(&poly.coeffs[m].mul(&i_m));
        i_prev = i_m;
        h0_pow = h0_pow.mul(h0);
        h1_pow = h1_pow.mul(h1);
    }

    // Truncation charge: |remainder| · |φ̂(s0)| · |h1 − h0| · sup |e^{ihω}|.
    let span = h1.sub(h0);
    let hull = h0.hull(h1);
    let decay_sup = RealInterval::new(
        Float::new(prec.bits()),
        hull.mul(&poly.omega.im).neg().exp().mag(),
    );
    let charge = poly
        .remainder
        .mul(&poly.phihat_s0.abs())
        .mul(&RealInterval::new(Float::new(prec.bits()), span.mag()))
        .mul(&decay_sup);

    let main = acc.mul(&poly.phihat_s0).mul_i();
    Ok(main.inflate(&RealInterval::new(Float::new(prec.bits()), charge.mag())))
}

/// One vertical-line evaluation state (used by tests to expose the anchor).
pub struct LineState {
    pub sigma: RealInterval,
    pub anchor_t: Float,
    pub anchor_bound: RealInterval,
}

/// Re Φ̂(σ + i t) at each requested height (sorted ascending, all within
/// [0, anchor_t]), by downward Taylor stepping from the anchor where
/// |Re Φ̂| ≤ B(σ, anchor_t).
///
/// Step sizing: every enclosure below a step inherits that step's remainder
/// charge, so with M heights the total inherited charge is at most
/// M · Σ_steps charge; the 1e-12 relative target and the Gaussian decay of
/// φ̂ keep this far below any practical budget share (the anchor bound is
/// charged once per returned value as the initial condition).
pub fn re_phihat_line(
    sigma: &RealInterval,
    heights: &[RealInterval],
    ctx: &MellinContext,
    anchor_t: f64,
) -> Result<Vec<RealInterval>> {
    let anchor = Float::with_val(ctx.prec.bits(), anchor_t);
    let bound = zeros::b_bound(sigma, &RealInterval::point(anchor.clone()), ctx)?;
    walk_line(sigma, heights, ctx, anchor, bound)
}

pub fn walk_line(
    sigma: &RealInterval,
    heights: &[RealInterval],
    ctx: &MellinContext,
    anchor_t: Float,
    anchor_bound: RealInterval,
) -> Result<Vec<RealInterval>> {
    let prec = ctx.prec;
    let p = prec.bits();
    for w in heights.windows(2) {
        if !(w[0].lo() <= w[1].lo()) {
            return Err(rint::Error::Domain("heights must be sorted ascending").into());
        }
    }
    if let Some(last) = heights.last() {
        if !(last.mag() <= anchor_t) {
            return Err(Error::CoverageGap {
                have: anchor_t.to_f64(),
                need: last.mag().to_f64(),
            });
        }
    }
    if heights.iter().any(|h| h.lo() < &0u32) {
        return Err(rint::Error::Domain("heights must be nonnegative").into());
    }

    // The walk serves exact midpoints; interval heights are re-inflated at
    // the end through |Re Φ̂(σ+it₂) − Re Φ̂(σ+it₁)| ≤ |t₂−t₁| sup |φ̂|.
    let mids: Vec<Float> = heights.iter().map(|h| h.mid()).collect();

    let b = RealInterval::new(Float::new(p), anchor_bound.mag());
    let mut current = b.neg().hull(&b);
    let mut t_cur = anchor_t;
    let mut out: Vec<Option<RealInterval>> = vec![None; heights.len()];
    let mut next = heights.len();

    let lambda_hi = ctx.lambda.mag().to_f64();

    while next > 0 {
        let t_f = t_cur.to_f64();
        let sig = sigma.mag().to_f64().max(0.25);
        let mut r_f = (0.13 * (sig + t_f)).min(0.9 / lambda_hi);
        // Final approach: one exact half-step lands the bottom on 0. The
        // trigger keeps R = r/|s0| ≤ ~0.17 so the N = 16 remainder target
        // still holds.
        let exact_half = t_f <= 0.3 * sig || t_f - 2.0 * r_f <= 0.0;
        let poly = loop {
            // Short-dyadic radii keep the step boundaries exact.
            let r = if exact_half {
                let mut half = t_cur.clone();
                half >>= 1;
                half
            } else {
                Float::with_val_round(24, r_f, rug::float::Round::Down).0
            };
            let r = Float::with_val(p, &r);
            let t_c = Float::with_val(p, &t_cur - &r);
            let s0 = ComplexInterval::new(sigma.clone(), RealInterval::point(t_c));
            match build_step_polynomial(&s0, &r, DEFAULT_STEP_ORDER, ctx) {
                Ok(poly) if poly.remainder.mag().to_f64() <= STEP_REL_TARGET => break poly,
                _ if exact_half => {
                    return Err(Error::RadiusTooLarge(
                        "final half-step cannot meet the remainder target",
                    ))
                }
                _ => {
                    r_f /= 2.0;
                    if r_f < 1e-9 {
                        return Err(Error::RadiusTooLarge(
                            "step radius collapsed without meeting the remainder target",
                        ));
                    }
                }
            }
        };
        let r = poly.radius.clone();
        let t_c = Float::with_val(p, &t_cur - &r);
        let step_bottom = Float::with_val(p, &t_c - &r);
        let top_off = RealInterval::point(r.clone());

        // Serve midpoints inside [step_bottom, t_cur], highest first.
        while next > 0 && mids[next - 1] >= step_bottom {
            let k = next - 1;
            let m_off = RealInterval::point(Float::with_val(p, &mids[k] - &t_c));
            let inc = integrate_step(&poly, &m_off, &top_off, ctx)?;
            out[k] = Some(current.sub(&inc.re));
            next -= 1;
        }
        if next == 0 {
            break;
        }

        let bot_off = RealInterval::point(Float::with_val(p, &step_bottom - &t_c));
        let inc = integrate_step(&poly, &bot_off, &top_off, ctx)?;
        current = current.sub(&inc.re);
        t_cur = step_bottom;
    }

    let mut result = Vec::with_capacity(heights.len());
    for (k, v) in out.into_iter().enumerate() {
        let v = v.expect("all heights served");
        let h = &heights[k];
        if h.width().is_zero() {
            result.push(v);
            continue;
        }
        let s = ComplexInterval::new(sigma.clone(), h.clone());
        let sup_phihat = phihat(&s, ctx)?.abs();
        let slack = RealInterval::new(Float::new(p), h.width())
            .mul_2exp(-1)
            .mul(&RealInterval::new(Float::new(p), sup_phihat.mag()));
        result.push(v.add(&slack.neg().hull(&slack)));
    }
    Ok(result)
}

/// Φ̂(1): real by conjugate symmetry; evaluated as Re Φ̂ on the σ = 1 line
/// stepped down to t = 0.
pub fn phihat_at_one(ctx: &MellinContext, anchor_t: f64) -> Result<RealInterval> {
    let one = RealInterval::one(ctx.prec);
    let zero = RealInterval::zero(ctx.prec);
    let vals = re_phihat_line(&one, &[zero], ctx, anchor_t)?;
    Ok(vals.into_iter().next().expect("one height requested"))
}

/// Magnitude bound for the left-line integral:
/// [0, exp(λ²/2)/(2πxλ) · (5√(2π) + 2/λ)].
pub fn minus_one_line_bound(ctx: &MellinContext) -> RealInterval {
    let prec = ctx.prec;
    let two_pi = RealInterval::pi(prec).mul_2exp(1);
    let num = ctx.lambda.square().mul_2exp(-1).exp();
    let five = RealInterval::from_u64(5, prec);
    let paren = five
        .mul(&two_pi.sqrt().expect("2π ≥ 0"))
        .add(&ctx.lambda.recip().expect("λ > 0").mul_2exp(1));
    let denom = two_pi.mul(&ctx.x).mul(&ctx.lambda);
    let v = num.mul(&paren).div(&denom).expect("denominator > 0");
    RealInterval::new(Float::new(prec.bits()), v.mag())
}

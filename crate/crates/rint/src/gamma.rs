//! Gamma-family enclosures.
//!
//! Complex `log Γ` is computed by shifting the argument right by the
//! recurrence until the Stirling series converges below the working
//! precision, then summing the Binet series with its remainder bound
//! `|R_K(z)| ≤ |B_{2K}| / ((2K−1)(2K) |z|^{2K−1}) · sec^{2K}(arg(z)/2)`
//! added outward. `Γ` on the left half-plane goes through the reflection
//! formula. The real upper incomplete `Γ(s, x)` reduces interval arguments
//! to monotone pieces evaluated with directed rounding.

use crate::complex::ComplexInterval;
use crate::real::RealInterval;
use crate::round::{self, DOWN, UP};
use crate::{Error, Precision, Result};
use once_cell::sync::Lazy;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::sync::Mutex;

const MAX_STIRLING_TERMS: usize = 160;

static BERNOULLI: Lazy<Mutex<Vec<Rational>>> = Lazy::new(|| Mutex::new(vec![Rational::from(1)]));

/// Bernoulli number `B_n` (B_1 = −1/2 convention; only even indices are used).
fn bernoulli(n: usize) -> Rational {
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        // B_m = −1/(m+1) Σ_{j<m} C(m+1, j) B_j
        let mut acc = Rational::new();
        for (j, b) in cache.iter().enumerate() {
            let c = Integer::from(m as u32 + 1).binomial(j as u32);
            acc += Rational::from((c, Integer::from(1))) * b;
        }
        acc /= -Rational::from((m as u32 + 1, 1u32));
        cache.push(acc);
    }
    cache[n].clone()
}

fn rational_interval(r: &Rational, prec: u32) -> RealInterval {
    RealInterval::new(round::eval(prec, r, DOWN), round::eval(prec, r, UP))
}

fn half_ln_two_pi(prec: Precision) -> RealInterval {
    RealInterval::pi(prec)
        .mul_2exp(1)
        .ln()
        .expect("2π > 0")
        .mul_2exp(-1)
}

/// Stirling series for `log Γ(w)`, valid for `Re w > 0`; the caller shifts
/// `w` right far enough for the series to reach `eps`.
fn stirling_log_gamma(w: &ComplexInterval, prec: Precision) -> Result<ComplexInterval> {
    let p = prec.bits();
    let ln_w = w.ln()?;
    let half = RealInterval::from_f64(0.5, prec);
    let mut main = w
        .sub(&ComplexInterval::from_real(half.clone()))
        .mul(&ln_w)
        .sub(w)
        .add(&ComplexInterval::from_real(half_ln_two_pi(prec)));

    // Magnitude floor of |w| and the sec(arg/2) factor, as upper-bound floats.
    let abs_w = w.abs();
    let abs_lo = abs_w.lo().clone();
    if !(abs_lo > 0u32) {
        return Err(Error::PoleProximity);
    }
    let theta_mag = w.arg()?.mag();
    let mut half_theta = theta_mag;
    half_theta >>= 1;
    let cos_half = round::cos(&half_theta, p, DOWN);
    if !(cos_half > 0u32) {
        return Err(Error::PoleProximity);
    }
    let sec = round::eval(p, 1u32 / &cos_half, UP);

    let scale = {
        let m = main.re.mag().max(&main.im.mag());
        if m < 1u32 {
            Float::with_val(p, 1)
        } else {
            m
        }
    };
    let eps = round::eval(p, &scale, UP) >> (p as i32 + 6);

    // First pass over remainder bounds to find the stopping index.
    let mut stop = None;
    let mut prev: Option<Float> = None;
    for k in 1..=MAX_STIRLING_TERMS {
        let b2k_abs = Rational::from(bernoulli(2 * k).abs_ref());
        let b2k = round::eval(p, &b2k_abs, UP);
        let denom = round::eval(p, (&abs_lo).pow((2 * k - 1) as u32), DOWN)
            * Float::with_val(p, (2 * k - 1) as u32 * (2 * k) as u32);
        let sec_pow = round::eval(p, (&sec).pow((2 * k) as u32), UP);
        let bound = round::eval(p, b2k * sec_pow / denom, UP);
        if bound <= eps {
            stop = Some((k, bound));
            break;
        }
        if let Some(pb) = &prev {
            if bound > *pb {
                // Series started diverging; keep the best (previous) bound.
                stop = Some((k - 1, pb.clone()));
                break;
            }
        }
        prev = Some(bound);
    }
    let (k_stop, rem_bound) = stop.unwrap_or_else(|| {
        (
            MAX_STIRLING_TERMS,
            prev.expect("at least one Stirling bound computed"),
        )
    });

    // Second pass: add terms 1..k_stop−1 and the remainder box.
    let w_inv = w.recip()?;
    let w_inv_sq = w_inv.square();
    let mut u = w_inv;
    for k in 1..k_stop {
        let c = bernoulli(2 * k) / Rational::from(((2 * k - 1) as u32 * (2 * k) as u32, 1u32));
        let coeff = rational_interval(&c, p);
        main = main.add(&u.mul_real(&coeff));
        u = u.mul(&w_inv_sq);
    }
    let rem = RealInterval::new(Float::new(p), rem_bound);
    Ok(main.inflate(&rem))
}

/// `log Γ(z)` (the analytic continuation that is real on the positive real
/// axis), for rectangles with `Re z > 0`.
pub fn log_gamma(z: &ComplexInterval) -> Result<ComplexInterval> {
    if !z.re.is_pos() {
        return Err(Error::Domain("log_gamma requires Re z > 0"));
    }
    let prec = z.prec();
    let p = prec.bits();
    // Shift right until the Stirling tail can undercut the precision target.
    let target = (8.0f64).max((p as f64 + 16.0) * 0.169).ceil();
    let re_lo = z.re.lo().to_f64();
    let shift = if re_lo >= target {
        0u32
    } else {
        (target - re_lo).ceil() as u32
    };
    let shifted = z.add(&ComplexInterval::from_real(RealInterval::from_u64(
        shift as u64,
        prec,
    )));
    let mut acc = stirling_log_gamma(&shifted, prec)?;
    // log Γ(z) = log Γ(z+n) − Σ_{k<n} Log(z+k); each factor has Re > 0.
    for k in 0..shift {
        let zk = z.add(&ComplexInterval::from_real(RealInterval::from_u64(
            k as u64, prec,
        )));
        if zk.contains_zero() {
            return Err(Error::PoleProximity);
        }
        acc = acc.sub(&zk.ln()?);
    }
    Ok(acc)
}

/// `Γ(z)` for rectangles avoiding the poles; reflection handles `Re z ≤ 0`.
pub fn gamma_cplx(z: &ComplexInterval) -> Result<ComplexInterval> {
    let prec = z.prec();
    if z.re.is_pos() {
        return Ok(log_gamma(z)?.exp());
    }
    // Reflection: Γ(z) = π / (sin(πz) Γ(1−z)). Poles of Γ are exactly the
    // zeros of the denominator, so a rectangle meeting one shows up as a
    // divisor containing zero.
    let one_minus = ComplexInterval::one(prec).sub(z);
    if !one_minus.re.is_pos() {
        return Err(Error::PoleProximity);
    }
    let pi = RealInterval::pi(prec);
    let sin_piz = z.mul_real(&pi).sin();
    let denom = sin_piz.mul(&gamma_cplx(&one_minus)?);
    ComplexInterval::from_real(pi)
        .div(&denom)
        .map_err(|_| Error::PoleProximity)
}

/// Real `Γ` over an interval, using monotonicity away from the interior
/// minimum and a convexity tangent bound across it.
pub fn gamma_real(s: &RealInterval) -> Result<RealInterval> {
    if !s.is_pos() {
        return Err(Error::Domain("gamma_real requires s > 0"));
    }
    let p = s.prec_bits();
    let at = |f: &Float, dir: Round| round::gamma(f, p, dir);
    // Γ has a single interior minimum near 1.4616 on (0, ∞).
    const X_MIN: f64 = 1.461_632_144_968_362_3;
    if s.lo().to_f64() >= 1.47 {
        return Ok(RealInterval::new(at(s.lo(), DOWN), at(s.hi(), UP)));
    }
    if s.hi().to_f64() <= 1.46 {
        return Ok(RealInterval::new(at(s.hi(), DOWN), at(s.lo(), UP)));
    }
    // Straddles the minimum: upper hull of the endpoints, lower bound from
    // the tangent at c (Γ is convex on (0, ∞)).
    let hi = at(s.lo(), UP).max(&at(s.hi(), UP));
    let prec = Precision::new(p);
    let c = RealInterval::from_f64(X_MIN, prec);
    let gc = RealInterval::new(at(c.lo(), DOWN), at(c.hi(), UP));
    let mut d_lo = c.lo().clone();
    d_lo.digamma_round(DOWN);
    let mut d_hi = c.hi().clone();
    d_hi.digamma_round(UP);
    let slope = gc.mul(&RealInterval::new(d_lo, d_hi));
    let tangent = gc.add(&slope.mul(&s.sub(&c)));
    Ok(RealInterval::new(tangent.lo().clone(), hi))
}

/// Upper incomplete `Γ(s, x) = ∫_x^∞ t^{s−1} e^{−t} dt` for real intervals,
/// `x ≥ 0` (and `s > 0` when `x` may reach 0).
pub fn incomplete_gamma(s: &RealInterval, x: &RealInterval) -> Result<RealInterval> {
    if !x.is_nonneg() {
        return Err(Error::Domain("incomplete_gamma requires x ≥ 0"));
    }
    if x.lo().is_zero() && !s.is_pos() {
        return Err(Error::Domain("Γ(s, 0) diverges for s ≤ 0"));
    }
    let p = s.prec_bits().max(x.prec_bits());
    let one = Float::with_val(p, 1);
    if *x.lo() >= one {
        // Increasing in s (t ≥ x ≥ 1), decreasing in x.
        return Ok(RealInterval::new(
            round::gamma_inc(s.lo(), x.hi(), p, DOWN),
            round::gamma_inc(s.hi(), x.lo(), p, UP),
        ));
    }
    if *x.hi() <= one {
        // Γ(s, x) = Γ(s, 1) + ∫_x^1 t^{s−1} e^{−t} dt; the first piece is
        // increasing in s, the integral is decreasing in s and in x.
        let a_lo = round::gamma_inc(s.lo(), &one, p, DOWN);
        let a_hi = round::gamma_inc(s.hi(), &one, p, UP);
        let b_lo = round::eval(
            p,
            round::gamma_inc(s.hi(), x.hi(), p, DOWN) - round::gamma_inc(s.hi(), &one, p, UP),
            DOWN,
        );
        let b_hi = round::eval(
            p,
            round::gamma_inc(s.lo(), x.lo(), p, UP) - round::gamma_inc(s.lo(), &one, p, DOWN),
            UP,
        );
        return Ok(RealInterval::new(
            round::eval(p, &a_lo + &b_lo, DOWN),
            round::eval(p, &a_hi + &b_hi, UP),
        ));
    }
    // x straddles 1: union of the two monotone pieces.
    let prec = Precision::new(p);
    let low = incomplete_gamma(
        s,
        &RealInterval::new(x.lo().clone(), one.clone()),
    )?;
    let high = incomplete_gamma(s, &RealInterval::new(one, x.hi().clone()))?;
    let _ = prec;
    Ok(low.hull(&high))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn cplx(re: f64, im: f64) -> ComplexInterval {
        ComplexInterval::point_f64(re, im, p())
    }

    #[test]
    fn gamma_at_one_and_half() {
        let g1 = gamma_cplx(&cplx(1.0, 0.0)).unwrap();
        assert!(g1.re.contains_f64(1.0));
        assert!(g1.im.contains_f64(0.0));
        assert!(g1.re.width().to_f64() < 1e-30);

        let gh = gamma_cplx(&cplx(0.5, 0.0)).unwrap();
        let sqrt_pi = RealInterval::pi(p()).sqrt().unwrap();
        assert!(gh.re.overlaps(&sqrt_pi));
    }

    #[test]
    fn gamma_matches_mpfr_on_positive_reals() {
        for v in [0.25, 0.75, 1.5, 3.0, 7.25, 19.5] {
            let ours = gamma_cplx(&cplx(v, 0.0)).unwrap();
            let mpfr = round::gamma(&Float::with_val(256, v), 256, Round::Nearest);
            assert!(ours.re.contains(&Float::with_val(128, &mpfr)), "v = {v}");
            assert!(ours.im.contains_f64(0.0));
        }
    }

    #[test]
    fn log_gamma_recurrence_identity() {
        // log Γ(z+1) − log Γ(z) − Log z must contain 0.
        for (re, im) in [(0.25, 25.0), (0.5, 3.0), (2.0, -7.0), (13.0, 0.5)] {
            let z = cplx(re, im);
            let z1 = z.add(&ComplexInterval::one(p()));
            let L = log_gamma(&z).unwrap();
            let l1 = log_gamma(&z1).unwrap();
            let diff = l1.sub(&L).sub(&z.ln().unwrap());
            assert!(
                diff.contains_point_f64(0.0, 0.0),
                "identity failed at {re}+{im}i: {:?}",
                diff
            );
        }
    }

    #[test]
    fn gamma_reflection_identity() {
        // Γ(z) Γ(1−z) sin(πz) / π must contain 1 (checks Stirling remainder
        // + shift against the elementary sine).
        for (re, im) in [(0.25, 0.6), (0.5, 14.0), (0.75, -2.0), (0.1, 40.0)] {
            let z = cplx(re, im);
            let one_minus = ComplexInterval::one(p()).sub(&z);
            let prod = gamma_cplx(&z)
                .unwrap()
                .mul(&gamma_cplx(&one_minus).unwrap())
                .mul(&z.mul_real(&RealInterval::pi(p())).sin());
            let quot = prod.div_real(&RealInterval::pi(p())).unwrap();
            assert!(
                quot.contains_point_f64(1.0, 0.0),
                "reflection failed at {re}+{im}i: {:?}",
                quot
            );
        }
    }

    #[test]
    fn gamma_left_half_plane() {
        // Γ(−1.5) = 4√π/3 ≈ 2.3632718
        let g = gamma_cplx(&cplx(-1.5, 0.0)).unwrap();
        assert!((g.re.mid().to_f64() - 2.363_271_801_207_354_7).abs() < 1e-14);
        assert!(g.im.contains_f64(0.0));
        // Rectangle containing a pole errors.
        let bad = ComplexInterval::new(
            RealInterval::from_f64(-0.1, p()).hull(&RealInterval::from_f64(0.1, p())),
            RealInterval::from_f64(-0.1, p()).hull(&RealInterval::from_f64(0.1, p())),
        );
        assert!(gamma_cplx(&bad).is_err());
    }

    #[test]
    fn incomplete_gamma_exponential_identity() {
        // Γ(1, x) = e^{−x}
        let s = RealInterval::one(p());
        let x = RealInterval::from_u64(2, p());
        let g = incomplete_gamma(&s, &x).unwrap();
        let oracle = RealInterval::from_i64(-2, p()).exp();
        assert!(g.overlaps(&oracle));
        assert!(g.width().to_f64() < 1e-30);
    }

    #[test]
    fn incomplete_gamma_interval_s_encloses_endpoints() {
        let s = RealInterval::from_f64(0.58, p()).hull(&RealInterval::from_f64(0.61, p()));
        for x_pair in [(0.2, 0.3), (0.9, 1.1), (2.0, 2.5)] {
            let x = RealInterval::from_f64(x_pair.0, p()).hull(&RealInterval::from_f64(x_pair.1, p()));
            let enc = incomplete_gamma(&s, &x).unwrap();
            for sv in [0.58, 0.59, 0.61] {
                for xv in [x_pair.0, (x_pair.0 + x_pair.1) / 2.0, x_pair.1] {
                    let pt = incomplete_gamma(
                        &RealInterval::from_f64(sv, p()),
                        &RealInterval::from_f64(xv, p()),
                    )
                    .unwrap();
                    assert!(
                        enc.overlaps(&pt),
                        "Γ({sv},{xv}) = {:?} outside {:?}",
                        pt,
                        enc
                    );
                }
            }
        }
    }

    #[test]
    fn gamma_real_across_minimum() {
        let s = RealInterval::from_f64(1.2, p()).hull(&RealInterval::from_f64(1.8, p()));
        let g = gamma_real(&s).unwrap();
        // min Γ ≈ 0.885603, attained inside; endpoints are larger.
        assert!(g.lo().to_f64() <= 0.8857);
        assert!(g.lo().to_f64() > 0.87);
        assert!(g.contains_f64(0.9));
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(3), Rational::new());
    }
}

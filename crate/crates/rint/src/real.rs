//! Real intervals with outward rounding.

use crate::round::{self, DOWN, UP};
use crate::{Error, Precision, Result};
use rug::float::Round;
use rug::ops::{NegAssign, Pow};
use rug::{Float, Integer};
use std::cmp::Ordering;
use std::fmt;

/// A closed interval `[lo, hi]` of extended reals.
///
/// Endpoints are MPFR floats; `lo <= hi` always holds and every operation
/// rounds `lo` down and `hi` up, so results enclose the exact image.
#[derive(Clone, PartialEq)]
pub struct RealInterval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

fn prec2(a: &RealInterval, b: &RealInterval) -> u32 {
    a.prec_bits().max(b.prec_bits())
}

impl RealInterval {
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN endpoint");
        assert!(lo <= hi, "inverted interval: {} > {}", lo, hi);
        RealInterval { lo, hi }
    }

    pub fn point(v: Float) -> Self {
        assert!(!v.is_nan(), "NaN endpoint");
        RealInterval { lo: v.clone(), hi: v }
    }

    /// Exact conversion; integers and dyadics never need rounding at `prec`
    /// when they fit, otherwise the endpoints are rounded outward.
    pub fn from_u64(v: u64, prec: Precision) -> Self {
        RealInterval::new(
            round::eval(prec.bits(), v, DOWN),
            round::eval(prec.bits(), v, UP),
        )
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        RealInterval::new(
            round::eval(prec.bits(), v, DOWN),
            round::eval(prec.bits(), v, UP),
        )
    }

    pub fn from_f64(v: f64, prec: Precision) -> Self {
        assert!(v.is_finite());
        RealInterval::new(
            round::eval(prec.bits(), v, DOWN),
            round::eval(prec.bits(), v, UP),
        )
    }

    pub fn from_integer(v: &Integer, prec: Precision) -> Self {
        RealInterval::new(
            round::eval(prec.bits(), v, DOWN),
            round::eval(prec.bits(), v, UP),
        )
    }

    /// `mantissa * 2^exp`, exact.
    pub fn from_dyadic(mantissa: i64, exp: i32, prec: Precision) -> Self {
        let mut f = round::eval(prec.bits(), mantissa, DOWN);
        f <<= exp;
        let mut g = round::eval(prec.bits(), mantissa, UP);
        g <<= exp;
        RealInterval::new(f, g)
    }

    /// Parses a decimal literal, rounding outward.
    pub fn from_decimal(s: &str, prec: Precision) -> Result<Self> {
        let parsed = Float::parse(s).map_err(|_| Error::Domain("unparsable decimal"))?;
        let lo = round::eval(prec.bits(), parsed, DOWN);
        let parsed = Float::parse(s).unwrap();
        let hi = round::eval(prec.bits(), parsed, UP);
        Ok(RealInterval::new(lo, hi))
    }

    pub fn zero(prec: Precision) -> Self {
        RealInterval::point(Float::new(prec.bits()))
    }

    pub fn one(prec: Precision) -> Self {
        RealInterval::from_u64(1, prec)
    }

    pub fn pi(prec: Precision) -> Self {
        RealInterval::new(round::pi(prec.bits(), DOWN), round::pi(prec.bits(), UP))
    }

    pub fn ln2(prec: Precision) -> Self {
        RealInterval::new(round::ln2(prec.bits(), DOWN), round::ln2(prec.bits(), UP))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec_bits(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn prec(&self) -> Precision {
        Precision::new(self.prec_bits())
    }

    pub fn width(&self) -> Float {
        round::eval(self.prec_bits(), &self.hi - &self.lo, UP)
    }

    pub fn mid(&self) -> Float {
        let mut m = round::eval(self.prec_bits(), &self.hi + &self.lo, Round::Nearest);
        m >>= 1;
        m
    }

    /// Supremum of `|x|` over the interval, rounded up.
    pub fn mag(&self) -> Float {
        let a = round::eval(self.prec_bits(), self.lo.abs_ref(), UP);
        let b = round::eval(self.prec_bits(), self.hi.abs_ref(), UP);
        a.max(&b)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0u32 && self.hi >= 0u32
    }

    pub fn contains_f64(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains(&self, v: &Float) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_nonneg(&self) -> bool {
        self.lo >= 0u32
    }

    pub fn is_pos(&self) -> bool {
        self.lo > 0u32
    }

    pub fn is_neg(&self) -> bool {
        self.hi < 0u32
    }

    /// Definite sign of every point in the interval, if there is one.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo > 0u32 {
            Some(Ordering::Greater)
        } else if self.hi < 0u32 {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        RealInterval::new(
            self.lo.clone().min(&other.lo),
            self.hi.clone().max(&other.hi),
        )
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.clone().max(&other.lo);
        let hi = self.hi.clone().min(&other.hi);
        if lo <= hi {
            Some(RealInterval::new(lo, hi))
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &RealInterval) -> RealInterval {
        let p = prec2(self, rhs);
        RealInterval::new(
            round::eval(p, &self.lo + &rhs.lo, DOWN),
            round::eval(p, &self.hi + &rhs.hi, UP),
        )
    }

    pub fn sub(&self, rhs: &RealInterval) -> RealInterval {
        let p = prec2(self, rhs);
        RealInterval::new(
            round::eval(p, &self.lo - &rhs.hi, DOWN),
            round::eval(p, &self.hi - &rhs.lo, UP),
        )
    }

    pub fn neg(&self) -> RealInterval {
        let mut lo = self.hi.clone();
        lo.neg_assign();
        let mut hi = self.lo.clone();
        hi.neg_assign();
        RealInterval::new(lo, hi)
    }

    pub fn mul(&self, rhs: &RealInterval) -> RealInterval {
        let p = prec2(self, rhs);
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = round::eval(p, a * b, DOWN);
            let u = round::eval(p, a * b, UP);
            lo = Some(match lo {
                None => d,
                Some(c) => c.min(&d),
            });
            hi = Some(match hi {
                None => u,
                Some(c) => c.max(&u),
            });
        }
        RealInterval::new(lo.unwrap(), hi.unwrap())
    }

    pub fn div(&self, rhs: &RealInterval) -> Result<RealInterval> {
        if rhs.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let p = prec2(self, rhs);
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = round::eval(p, a / b, DOWN);
            let u = round::eval(p, a / b, UP);
            lo = Some(match lo {
                None => d,
                Some(c) => c.min(&d),
            });
            hi = Some(match hi {
                None => u,
                Some(c) => c.max(&u),
            });
        }
        Ok(RealInterval::new(lo.unwrap(), hi.unwrap()))
    }

    pub fn recip(&self) -> Result<RealInterval> {
        RealInterval::one(self.prec()).div(self)
    }

    pub fn abs(&self) -> RealInterval {
        if self.is_nonneg() {
            self.clone()
        } else if self.hi <= 0u32 {
            self.neg()
        } else {
            RealInterval::new(Float::new(self.prec_bits()), self.mag())
        }
    }

    /// Tight interval square: `{x^2 : x ∈ self}`.
    pub fn square(&self) -> RealInterval {
        let a = self.abs();
        let p = self.prec_bits();
        RealInterval::new(
            round::eval(p, a.lo.square_ref(), DOWN),
            round::eval(p, a.hi.square_ref(), UP),
        )
    }

    /// Integer power; tight via monotonicity on each sign region.
    pub fn powi(&self, n: u32) -> RealInterval {
        let p = self.prec_bits();
        if n == 0 {
            return RealInterval::one(self.prec());
        }
        if n % 2 == 0 {
            let a = self.abs();
            RealInterval::new(
                round::eval(p, (&a.lo).pow(n), DOWN),
                round::eval(p, (&a.hi).pow(n), UP),
            )
        } else {
            RealInterval::new(
                round::eval(p, (&self.lo).pow(n), DOWN),
                round::eval(p, (&self.hi).pow(n), UP),
            )
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_2exp(&self, k: i32) -> RealInterval {
        let mut lo = self.lo.clone();
        lo <<= k;
        let mut hi = self.hi.clone();
        hi <<= k;
        RealInterval::new(lo, hi)
    }

    pub fn exp(&self) -> RealInterval {
        let p = self.prec_bits();
        RealInterval::new(round::exp(&self.lo, p, DOWN), round::exp(&self.hi, p, UP))
    }

    pub fn ln(&self) -> Result<RealInterval> {
        if !self.is_pos() {
            return Err(Error::Domain("log of nonpositive interval"));
        }
        let p = self.prec_bits();
        Ok(RealInterval::new(
            round::ln(&self.lo, p, DOWN),
            round::ln(&self.hi, p, UP),
        ))
    }

    pub fn sqrt(&self) -> Result<RealInterval> {
        if !self.is_nonneg() {
            return Err(Error::Domain("sqrt of negative interval"));
        }
        let p = self.prec_bits();
        Ok(RealInterval::new(
            round::sqrt(&self.lo, p, DOWN),
            round::sqrt(&self.hi, p, UP),
        ))
    }

    pub fn erf(&self) -> RealInterval {
        let p = self.prec_bits();
        RealInterval::new(round::erf(&self.lo, p, DOWN), round::erf(&self.hi, p, UP))
    }

    pub fn erfc(&self) -> RealInterval {
        let p = self.prec_bits();
        RealInterval::new(
            round::erfc(&self.hi, p, DOWN),
            round::erfc(&self.lo, p, UP),
        )
    }

    pub fn atan(&self) -> RealInterval {
        let p = self.prec_bits();
        RealInterval::new(
            round::atan(&self.lo, p, DOWN),
            round::atan(&self.hi, p, UP),
        )
    }

    pub fn sinh(&self) -> RealInterval {
        let p = self.prec_bits();
        RealInterval::new(
            round::sinh(&self.lo, p, DOWN),
            round::sinh(&self.hi, p, UP),
        )
    }

    pub fn cosh(&self) -> RealInterval {
        let p = self.prec_bits();
        let at_lo = round::cosh(&self.lo, p, UP);
        let at_hi = round::cosh(&self.hi, p, UP);
        let hi = at_lo.max(&at_hi);
        let lo = if self.contains_zero() {
            round::eval(p, 1u32, DOWN)
        } else {
            let a = self.abs();
            round::cosh(&a.lo, p, DOWN)
        };
        RealInterval::new(lo, hi)
    }

    /// Riemann zeta on the real axis; requires the interval to lie in (1, ∞).
    pub fn zeta(&self) -> Result<RealInterval> {
        if self.lo <= 1u32 {
            return Err(Error::Domain("real zeta requires argument > 1"));
        }
        let p = self.prec_bits();
        Ok(RealInterval::new(
            round::zeta(&self.hi, p, DOWN),
            round::zeta(&self.lo, p, UP),
        ))
    }

    pub fn cos(&self) -> RealInterval {
        let p = self.prec_bits();
        let clamp = RealInterval::new(round::eval(p, -1, DOWN), round::eval(p, 1, UP));
        // Fallback for huge arguments where locating extrema is pointless.
        let big = Float::with_val(32, 1u64 << 50);
        if self.mag() > big {
            return clamp;
        }
        let pi = RealInterval::pi(Precision::new(p));
        let two_pi = pi.mul_2exp(1);
        if self.width() >= *two_pi.lo() {
            return clamp;
        }
        let mut out = RealInterval::new(
            round::cos(&self.lo, p, DOWN),
            round::cos(&self.lo, p, UP),
        )
        .hull(&RealInterval::new(
            round::cos(&self.hi, p, DOWN),
            round::cos(&self.hi, p, UP),
        ));
        // Any multiple n·π possibly inside the interval contributes the
        // extremum (−1)^n; including it on uncertainty keeps the enclosure.
        let r_lo = self.lo.clone() / pi.hi();
        let r_hi = self.hi.clone() / pi.lo();
        let n_min = r_lo.to_f64().floor() as i64 - 1;
        let n_max = r_hi.to_f64().ceil() as i64 + 1;
        for n in n_min..=n_max {
            let npi = pi.mul(&RealInterval::from_i64(n, Precision::new(p)));
            if npi.overlaps(self) {
                let e = if n.rem_euclid(2) == 0 { 1i32 } else { -1i32 };
                out = out.hull(&RealInterval::from_i64(e as i64, Precision::new(p)));
            }
        }
        out.intersect(&clamp).expect("cos range")
    }

    pub fn sin(&self) -> RealInterval {
        let p = self.prec_bits();
        let clamp = RealInterval::new(round::eval(p, -1, DOWN), round::eval(p, 1, UP));
        let big = Float::with_val(32, 1u64 << 50);
        if self.mag() > big {
            return clamp;
        }
        let pi = RealInterval::pi(Precision::new(p));
        let two_pi = pi.mul_2exp(1);
        if self.width() >= *two_pi.lo() {
            return clamp;
        }
        let mut out = RealInterval::new(
            round::sin(&self.lo, p, DOWN),
            round::sin(&self.lo, p, UP),
        )
        .hull(&RealInterval::new(
            round::sin(&self.hi, p, DOWN),
            round::sin(&self.hi, p, UP),
        ));
        // Extrema of sin sit at (n + ½)π with value (−1)^n. The scan and the
        // endpoint rounding are both odd-symmetric, so sin(−I) = −sin(I)
        // exactly and conjugate symmetry of complex operations is exact.
        let half = RealInterval::from_f64(0.5, Precision::new(p));
        let r_lo = self.lo.clone() / pi.hi();
        let r_hi = self.hi.clone() / pi.lo();
        let n_min = r_lo.to_f64().floor() as i64 - 2;
        let n_max = r_hi.to_f64().ceil() as i64 + 2;
        for n in n_min..=n_max {
            let center = RealInterval::from_i64(n, Precision::new(p)).add(&half);
            let npi = pi.mul(&center);
            if npi.overlaps(self) {
                let e = if n.rem_euclid(2) == 0 { 1i64 } else { -1i64 };
                out = out.hull(&RealInterval::from_i64(e, Precision::new(p)));
            }
        }
        out.intersect(&clamp).expect("sin range")
    }

    /// The unique integer contained in the interval, if exactly one exists.
    pub fn unique_integer(&self) -> Result<Integer> {
        let p = self.prec_bits();
        let limit = Float::with_val(32, 1) << (p - 2) as i32;
        if self.mag() > limit {
            return Err(Error::Ambiguous);
        }
        let lo_int = self.lo.clone().ceil().to_integer().ok_or(Error::Ambiguous)?;
        let hi_int = self.hi.clone().floor().to_integer().ok_or(Error::Ambiguous)?;
        match lo_int.cmp(&hi_int) {
            Ordering::Greater => Err(Error::NoInteger),
            Ordering::Equal => Ok(lo_int),
            Ordering::Less => Err(Error::Ambiguous),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &RealInterval {
            type Output = RealInterval;
            fn $method(self, rhs: &RealInterval) -> RealInterval {
                RealInterval::$method(self, rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl std::ops::Neg for &RealInterval {
    type Output = RealInterval;
    fn neg(self) -> RealInterval {
        RealInterval::neg(self)
    }
}

/// Exact decimal expansion of a binary float (dyadic rationals always
/// terminate in base 10). Used for round-trip-exact report serialization.
pub fn exact_decimal(f: &Float) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    assert!(f.is_finite(), "exact_decimal of non-finite value");
    let (m, e) = f
        .to_integer_exp()
        .expect("finite float decomposes as m*2^e");
    if e >= 0 {
        let v = m << (e as u32);
        v.to_string()
    } else {
        let k = (-e) as u32;
        // m / 2^k = m * 5^k / 10^k
        let scaled = m * Integer::from(5).pow(k);
        let neg = scaled < 0;
        let digits = scaled.abs().to_string();
        let k = k as usize;
        let s = if digits.len() <= k {
            format!("0.{}{}", "0".repeat(k - digits.len()), digits)
        } else {
            let (int_part, frac_part) = digits.split_at(digits.len() - k);
            format!("{}.{}", int_part, frac_part)
        };
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if neg {
            format!("-{}", s)
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn iv(a: f64, b: f64) -> RealInterval {
        RealInterval::new(
            Float::with_val(128, a),
            Float::with_val(128, b),
        )
    }

    #[test]
    fn add_exact_endpoints() {
        let r = iv(1.0, 2.0).add(&iv(3.0, 4.0));
        assert_eq!(r.lo().to_f64(), 4.0);
        assert_eq!(r.hi().to_f64(), 6.0);
    }

    #[test]
    fn mul_symmetric_unit() {
        let r = iv(-1.0, 1.0).mul(&iv(-1.0, 1.0));
        assert_eq!(r.lo().to_f64(), -1.0);
        assert_eq!(r.hi().to_f64(), 1.0);
    }

    #[test]
    fn div_by_zero_straddle() {
        assert_eq!(
            iv(1.0, 2.0).div(&iv(-1.0, 1.0)).unwrap_err(),
            Error::DivisorContainsZero
        );
    }

    #[test]
    fn exp_of_zero_tight() {
        let r = RealInterval::zero(p()).exp();
        assert!(r.contains_f64(1.0));
        // width ≤ 4 ulp at 128 bits
        let ulp4 = Float::with_val(128, 1) >> 126;
        assert!(r.width() <= ulp4);
    }

    #[test]
    fn erfc_of_zero_contains_one() {
        assert!(RealInterval::zero(p()).erfc().contains_f64(1.0));
    }

    #[test]
    fn erfc_of_one_matches_series_oracle() {
        // Independent oracle: erfc(1) = 1 - 2/sqrt(pi) * sum (-1)^n / (n! (2n+1))
        // evaluated at 512 bits with an alternating-series remainder.
        let hp = 512;
        let mut sum = Float::new(hp);
        let mut term = Float::with_val(hp, 1);
        let mut n = 0u32;
        loop {
            let contrib = Float::with_val(hp, &term / (2 * n + 1));
            if n % 2 == 0 {
                sum += &contrib;
            } else {
                sum -= &contrib;
            }
            if contrib < Float::with_val(hp, Float::parse("1e-130").unwrap()) {
                break;
            }
            n += 1;
            term /= n; // term = 1 / n!
        }
        let two_over_sqrt_pi =
            Float::with_val(hp, 2) / Float::with_val(hp, rug::float::Constant::Pi).sqrt();
        let oracle = Float::with_val(hp, 1) - two_over_sqrt_pi * sum;
        let enc = RealInterval::one(p()).erfc();
        assert!(enc.contains(&Float::with_val(128, &oracle)));
        // Spot value from the expected decimal expansion (f64 resolution).
        assert!((enc.mid().to_f64() - 0.157_299_207_050_285_13).abs() < 1e-15);
    }

    #[test]
    fn cos_spans_extremum() {
        let r = iv(3.0, 3.3).cos(); // contains π → minimum −1
        assert!(r.contains_f64(-1.0));
        let r = iv(-0.1, 0.1).cos();
        assert!(r.contains_f64(1.0));
        assert!(r.lo().to_f64() > 0.99);
    }

    #[test]
    fn sin_basic() {
        let r = iv(1.5707963267948966, 1.5707963267948966).sin();
        assert!(r.contains_f64(1.0) || r.hi().to_f64() > 0.9999999);
        let r = iv(0.0, 0.0).sin();
        assert!(r.contains_f64(0.0));
        assert!(r.width().to_f64() < 1e-30);
    }

    #[test]
    fn unique_integer_cases() {
        assert_eq!(iv(77.9, 78.2).unique_integer().unwrap(), 78);
        assert_eq!(iv(77.9, 79.1).unique_integer().unwrap_err(), Error::Ambiguous);
        assert_eq!(iv(3.2, 3.9).unique_integer().unwrap_err(), Error::NoInteger);
    }

    #[test]
    fn zeta_real_enclosure() {
        let z2 = iv(2.0, 2.0).zeta().unwrap();
        // π²/6
        let pi2_6 = RealInterval::pi(p()).square().mul(
            &RealInterval::from_f64(1.0, p()).div(&RealInterval::from_u64(6, p())).unwrap(),
        );
        assert!(z2.overlaps(&pi2_6));
    }

    #[test]
    fn exact_decimal_round_trip() {
        let f = Float::with_val(128, 0.8125); // 13/16
        assert_eq!(exact_decimal(&f), "0.8125");
        let f = Float::with_val(128, -40);
        assert_eq!(exact_decimal(&f), "-40");
        let f = Float::with_val(64, 1) >> 5;
        assert_eq!(exact_decimal(&f), "0.03125");
    }
}

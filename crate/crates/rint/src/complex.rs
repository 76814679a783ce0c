//! Complex intervals with rectangle semantics.

use crate::real::RealInterval;
use crate::{Error, Precision, Result};
use rug::Float;
use std::fmt;

/// A rectangle `{a + bi : a ∈ re, b ∈ im}`.
///
/// Conjugation negates `im` exactly; all operations preserve the enclosure
/// property componentwise.
#[derive(Clone, PartialEq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl fmt::Debug for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?} i)", self.re, self.im)
    }
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn from_real(re: RealInterval) -> Self {
        let prec = re.prec();
        ComplexInterval {
            re,
            im: RealInterval::zero(prec),
        }
    }

    pub fn point_f64(re: f64, im: f64, prec: Precision) -> Self {
        ComplexInterval {
            re: RealInterval::from_f64(re, prec),
            im: RealInterval::from_f64(im, prec),
        }
    }

    pub fn zero(prec: Precision) -> Self {
        ComplexInterval {
            re: RealInterval::zero(prec),
            im: RealInterval::zero(prec),
        }
    }

    pub fn one(prec: Precision) -> Self {
        ComplexInterval {
            re: RealInterval::one(prec),
            im: RealInterval::zero(prec),
        }
    }

    pub fn prec(&self) -> Precision {
        Precision::new(self.re.prec_bits().max(self.im.prec_bits()))
    }

    pub fn conj(&self) -> Self {
        ComplexInterval {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexInterval {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// Multiplication by `i`: exact rotation of the rectangle.
    pub fn mul_i(&self) -> Self {
        ComplexInterval {
            re: self.im.neg(),
            im: self.re.clone(),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        ComplexInterval {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        ComplexInterval {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let ac = self.re.mul(&rhs.re);
        let bd = self.im.mul(&rhs.im);
        let ad = self.re.mul(&rhs.im);
        let bc = self.im.mul(&rhs.re);
        ComplexInterval {
            re: ac.sub(&bd),
            im: ad.add(&bc),
        }
    }

    pub fn mul_real(&self, rhs: &RealInterval) -> Self {
        ComplexInterval {
            re: self.re.mul(rhs),
            im: self.im.mul(rhs),
        }
    }

    /// Tight square: the real part uses interval squares to avoid the
    /// dependency blowup of `self.mul(self)`.
    pub fn square(&self) -> Self {
        let a2 = self.re.square();
        let b2 = self.im.square();
        let ab = self.re.mul(&self.im);
        ComplexInterval {
            re: a2.sub(&b2),
            im: ab.mul_2exp(1),
        }
    }

    /// Squared modulus `|z|²` as a real interval.
    pub fn norm_sq(&self) -> RealInterval {
        self.re.square().add(&self.im.square())
    }

    /// Modulus enclosure.
    pub fn abs(&self) -> RealInterval {
        self.norm_sq().sqrt().expect("norm_sq is nonnegative")
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let n = rhs.norm_sq();
        if n.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let num = self.mul(&rhs.conj());
        Ok(ComplexInterval {
            re: num.re.div(&n)?,
            im: num.im.div(&n)?,
        })
    }

    pub fn recip(&self) -> Result<Self> {
        ComplexInterval::one(self.prec()).div(self)
    }

    pub fn div_real(&self, rhs: &RealInterval) -> Result<Self> {
        Ok(ComplexInterval {
            re: self.re.div(rhs)?,
            im: self.im.div(rhs)?,
        })
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = ComplexInterval::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let scale = self.re.exp();
        ComplexInterval {
            re: scale.mul(&self.im.cos()),
            im: scale.mul(&self.im.sin()),
        }
    }

    /// Argument of the rectangle; requires `Re z > 0`.
    pub fn arg(&self) -> Result<RealInterval> {
        if !self.re.is_pos() {
            return Err(Error::Domain("arg requires Re z > 0"));
        }
        Ok(self.im.div(&self.re)?.atan())
    }

    /// Principal logarithm on the right half-plane.
    pub fn ln(&self) -> Result<Self> {
        if !self.re.is_pos() {
            return Err(Error::Domain("complex log restricted to Re z > 0"));
        }
        let modulus = self.norm_sq().ln()?.mul_2exp(-1);
        Ok(ComplexInterval {
            re: modulus,
            im: self.arg()?,
        })
    }

    /// Complex sine; needed for the reflection formula of Γ.
    pub fn sin(&self) -> Self {
        ComplexInterval {
            re: self.re.sin().mul(&self.im.cosh()),
            im: self.re.cos().mul(&self.im.sinh()),
        }
    }

    /// Distance of the rectangle from a real point, in the max metric;
    /// zero when the point is inside.
    pub fn contains_point_f64(&self, re: f64, im: f64) -> bool {
        self.re.contains_f64(re) && self.im.contains_f64(im)
    }

    pub fn contains(&self, re: &Float, im: &Float) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    /// Inflates both components by `±bound` (a nonnegative upper bound on a
    /// complex perturbation's modulus; the rectangle contains the disc).
    pub fn inflate(&self, bound: &RealInterval) -> Self {
        debug_assert!(bound.is_nonneg());
        let pad = RealInterval::new(bound.mag().clone_neg(), bound.mag());
        ComplexInterval {
            re: self.re.add(&pad),
            im: self.im.add(&pad),
        }
    }
}

/// `x^s = exp(s · log x)` for real `x > 0`.
pub fn cpow(x: &RealInterval, s: &ComplexInterval) -> Result<ComplexInterval> {
    if !x.is_pos() {
        return Err(Error::Domain("cpow base must be positive"));
    }
    let lx = x.ln()?;
    Ok(s.mul_real(&lx).exp())
}

trait CloneNeg {
    fn clone_neg(&self) -> Self;
}

impl CloneNeg for Float {
    fn clone_neg(&self) -> Float {
        let mut f = self.clone();
        rug::ops::NegAssign::neg_assign(&mut f);
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn cpow_integer_power() {
        let x = RealInterval::from_u64(10, p());
        let s = ComplexInterval::point_f64(2.0, 0.0, p());
        let r = cpow(&x, &s).unwrap();
        assert!(r.re.contains_f64(100.0));
        assert!(r.im.contains_f64(0.0));
    }

    #[test]
    fn cpow_zero_exponent() {
        let x = RealInterval::from_u64(10, p());
        let s = ComplexInterval::zero(p());
        let r = cpow(&x, &s).unwrap();
        assert!(r.re.contains_f64(1.0));
    }

    #[test]
    fn cpow_conjugate_symmetry_exact() {
        let x = RealInterval::from_u64(10, p());
        let s = ComplexInterval::point_f64(0.5, 14.134725, p());
        let a = cpow(&x, &s.conj()).unwrap();
        let b = cpow(&x, &s).unwrap().conj();
        assert_eq!(a.re, b.re);
        assert_eq!(a.im, b.im);
    }

    #[test]
    fn cpow_on_critical_line_matches_high_precision() {
        // High-precision oracle along the same exp/log route.
        let hp = Precision::new(512);
        let x = RealInterval::from_u64(10, hp);
        let s = ComplexInterval::new(
            RealInterval::from_f64(0.5, hp),
            RealInterval::from_f64(14.134725, hp),
        );
        let fine = cpow(&x, &s).unwrap();
        let coarse = cpow(
            &RealInterval::from_u64(10, p()),
            &ComplexInterval::point_f64(0.5, 14.134725, p()),
        )
        .unwrap();
        assert!(coarse.re.contains_interval(&fine.re));
        assert!(coarse.im.contains_interval(&fine.im));
    }

    #[test]
    fn division_round_trip() {
        let a = ComplexInterval::point_f64(3.0, -2.0, p());
        let b = ComplexInterval::point_f64(1.0, 7.0, p());
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        assert!(back.re.contains_f64(3.0));
        assert!(back.im.contains_f64(-2.0));
    }

    #[test]
    fn division_by_rectangle_containing_zero() {
        let a = ComplexInterval::point_f64(1.0, 0.0, p());
        let b = ComplexInterval::new(
            RealInterval::from_f64(-0.5, p()).hull(&RealInterval::from_f64(0.5, p())),
            RealInterval::from_f64(-0.5, p()).hull(&RealInterval::from_f64(0.5, p())),
        );
        assert_eq!(a.div(&b).unwrap_err(), Error::DivisorContainsZero);
    }

    #[test]
    fn exp_ln_round_trip() {
        let z = ComplexInterval::point_f64(0.7, 0.3, p());
        let w = z.exp().ln().unwrap();
        assert!(w.re.contains_f64(0.7));
        assert!(w.im.contains_f64(0.3));
    }
}

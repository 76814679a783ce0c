//! Rigorous interval arithmetic on multiprecision floats.
//!
//! Every value is an enclosure: a [`RealInterval`] is a pair of MPFR floats
//! with the lower endpoint rounded down and the upper endpoint rounded up, so
//! that for any operation `F` lifted from a pointwise `f`, `f(a, b) ∈ F(A, B)`
//! whenever `a ∈ A`, `b ∈ B`. [`ComplexInterval`] is a rectangle (independent
//! real and imaginary enclosures).
//!
//! Elementary functions (`exp`, `log`, `sqrt`, `erf`, `erfc`, `sin`, `cos`)
//! ride on MPFR's correctly rounded implementations with per-endpoint rounding
//! directions. The gamma family (complex `Γ`/`log Γ` via a Stirling series
//! with an explicit remainder, and the real upper incomplete `Γ(s, x)`) lives
//! in [`gamma`].

pub mod complex;
#[doc(hidden)]
pub mod fuzz;
pub mod gamma;
pub mod real;
mod round;

pub use complex::ComplexInterval;
pub use gamma::{gamma_cplx, incomplete_gamma, log_gamma};
pub use real::RealInterval;

use thiserror::Error;

/// Working precision for interval endpoints, in bits.
///
/// Raising the precision never widens a result computed from the same point
/// inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision(u32);

impl Precision {
    pub const DEFAULT_BITS: u32 = 128;

    pub fn new(bits: u32) -> Self {
        assert!(bits >= 8, "precision below 8 bits is not supported");
        Precision(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Precision scaled by an integer factor, for oracle evaluations.
    pub fn scale(self, factor: u32) -> Self {
        Precision(self.0 * factor)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(Self::DEFAULT_BITS)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("divisor interval contains zero")]
    DivisorContainsZero,
    #[error("argument outside domain: {0}")]
    Domain(&'static str),
    #[error("enclosure meets a pole of the function")]
    PoleProximity,
    #[error("interval contains no integer")]
    NoInteger,
    #[error("interval contains more than one integer")]
    Ambiguous,
}

pub type Result<T> = std::result::Result<T, Error>;

//! Analytic prime counting with guaranteed enclosures.
//!
//! The engine evaluates Riemann's weighted prime-power count π*(x) through a
//! smoothed explicit formula: a Gaussian Mellin pair (φ, φ̂) splits π*(x)
//! into an antiderivative Φ̂ evaluated at 1 and at the nontrivial zeta zeros,
//! a −log 2 constant, a bounded left-line integral, and a sieved window sum of
//! χ_x − φ over prime powers near x. Every truncation, tail, and rounding
//! contribution is tracked in an auditable error ledger, and the final
//! interval must isolate a single integer: π(x).
//!
//! Modules:
//! - [`mellin`]: φ, φ̂, and line evaluation of Re Φ̂ by Taylor stepping.
//! - [`sieve`]: segmented sieve, exact moment sums, window sums and tails.
//! - [`zeros`]: zero-table ingestion, counting envelopes, truncation bounds.
//! - [`zetafft`]: windowed-FFT evaluation of a real critical-line function on
//!   a grid, with per-stage aliasing/truncation budgets, plus sign-change
//!   zero location.
//! - [`pipeline`]: parameter selection, orchestration, reporting, CLI glue.

pub mod error;
pub mod mellin;
pub mod pipeline;
pub mod sieve;
pub mod zeros;
pub mod zetafft;

pub use error::{Error, Result};
pub use rint::{ComplexInterval, Precision, RealInterval};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Interval(#[from] rint::Error),
    #[error("step radius too large: {0}")]
    RadiusTooLarge(&'static str),
    #[error("error budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("zero file covers heights only up to {have}, need {need}")]
    CoverageGap { have: f64, need: f64 },
    #[error("zero count {count} inconsistent with the counting envelope [{lo}, {hi}] at t = {t}")]
    InconsistentCount { count: u64, lo: f64, hi: f64, t: f64 },
    #[error("malformed zero file: {0}")]
    Format(String),
    #[error("zero ordinates not strictly increasing at record {index}")]
    MonotonicityViolation { index: usize },
    #[error("ordinate width exceeds the declared accuracy at record {index}")]
    AccuracyViolation { index: usize },
    #[error("sieving primes cover only up to {have}, need {need}")]
    InsufficientSievingPrimes { have: u64, need: u64 },
    #[error("segment too wide for a rigorous Taylor remainder: {0}")]
    SegmentTooWide(String),
    #[error("segments do not tile the window: {0}")]
    TilingGap(String),
    #[error("grid parameter violation: {0}")]
    ParamViolation(String),
    #[error("imaginary part of a grid value excludes zero")]
    RealityCheckFailed,
    #[error("vector length mismatch: {0}")]
    SizeMismatch(String),
    #[error("no feasible lambda for the given budget")]
    Infeasible,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

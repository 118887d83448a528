use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimensions must be at least 1x1, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("enumeration of 2^{dimension} elements exceeds the guard of 2^{limit}")]
    GuardExceeded { dimension: usize, limit: u32 },
    #[error("crossover probability must satisfy 0 < eps < 1/2, got {0}")]
    InvalidCrossover(f64),
    #[error("row weight k must satisfy 0 < k <= n/2 (n = {n}), got {k}")]
    InvalidRowWeight { k: f64, n: u32 },
    #[error("weight {weight} is outside [0, {n}]")]
    WeightOutOfRange { weight: u32, n: u32 },
    #[error("overlap {v} is outside [{lo}, {hi}] for weights ({w1}, {w2})")]
    OverlapOutOfRange { w1: u32, w2: u32, v: u32, lo: u32, hi: u32 },
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain { name: &'static str, value: f64, domain: &'static str },
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("cannot parse rational number from {0:?}")]
    ParseRational(alloc::string::String),
}

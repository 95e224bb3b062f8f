use thiserror::Error;

use crate::dist::Symbol;

/// Errors raised by the estimation, bound and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("{name} = {value} is out of range: expected {expected}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("divergence is infinite: symbol {symbol} has mass under p but not under q")]
    InfiniteDivergence { symbol: Symbol },

    #[error("empty sample")]
    EmptySample,

    #[error("sample size n = {n} is below the minimum {min_n} required for delta = {delta}")]
    InsufficientSamples { n: u64, min_n: u64, delta: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("value exp({log_value}) is too large to materialize as an integer")]
    Unrepresentable { log_value: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("optimization failed in {context}: {diagnostics}")]
    OptimizationFailed {
        context: &'static str,
        diagnostics: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Usage(String),

    #[error("invalid value for '{key}': {message}")]
    InvalidArgument { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NonFinite(_) | Error::OptimizationFailed { .. })
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::OutOfDomain { .. } => "out_of_domain",
            Error::InfiniteDivergence { .. } => "infinite_divergence",
            Error::EmptySample => "empty_sample",
            Error::InsufficientSamples { .. } => "insufficient_samples",
            Error::Parse { .. } => "parse",
            Error::Degenerate(_) => "degenerate",
            Error::Unrepresentable { .. } => "unrepresentable",
            Error::NonFinite(_) => "non_finite",
            Error::OptimizationFailed { .. } => "optimization_failed",
            Error::Unsupported(_) => "unsupported",
            Error::Usage(_) => "usage",
            Error::InvalidArgument { .. } => "invalid_argument",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(value: f64, context: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(context.to_string()))
    }
}

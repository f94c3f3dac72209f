use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant family onto an
/// exit status via [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid irrational spec: {0}")]
    InvalidSpec(String),

    #[error("invalid digits: {0}")]
    InvalidDigits(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("precision exhausted: certified radius {radius:e} exceeds tolerance {tolerance:e}; raise --precision-bits")]
    PrecisionExhausted { radius: f64, tolerance: f64 },

    #[error(
        "threshold {threshold} is within the certified radius {radius:e} of the computed value"
    )]
    ThresholdStraddle { threshold: f64, radius: f64 },

    #[error("convergent table too short: index {needed} requested, {available} available")]
    TableTooShort { needed: usize, available: usize },

    #[error("resource budget exceeded: {what} needs {needed}, budget is {budget}")]
    ResourceExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("zero variance: phi_n vanishes identically for n = {0}")]
    ZeroVariance(u64),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted { .. } | Error::ThresholdStraddle { .. } => 3,
            Error::ResourceExceeded { .. } => 4,
            Error::Io(_) | Error::NoConvergence(_) | Error::ZeroVariance(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

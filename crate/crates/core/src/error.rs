use thiserror::Error;

/// Errors raised across the estimation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid sampling pattern: {0}")]
    InvalidPattern(String),

    #[error("difference {0} is not produced by the sampling pattern")]
    MissingDifference(usize),

    #[error("index {index} out of range for {len} subbands")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("no tabulated Golomb ruler of order {0} (table covers orders 2-26)")]
    UnknownRulerOrder(usize),

    #[error("invalid process specification: {0}")]
    InvalidProcess(String),

    #[error("signal too short: need {required} samples, have {available}")]
    InsufficientSignal { required: usize, available: usize },

    #[error("measurement matrix is rank deficient (rank {rank} < {columns})")]
    RankDeficient { rank: usize, columns: usize },

    #[error("NNLS did not converge within {0} iterations")]
    MaxIterationsExceeded(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid configuration field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Configuration error tagged with the offending field.
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    /// True for failures of the numerical solvers rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::RankDeficient { .. } | Error::MaxIterationsExceeded(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

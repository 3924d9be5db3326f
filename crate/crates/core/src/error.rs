use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands live on different groups ({left} vs {right})")]
    ParamsMismatch { left: String, right: String },

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("lattice literal: {0}")]
    LatticeLiteral(String),

    #[error("not a frame: lower frame bound {lower:e} is below threshold {threshold:e}")]
    NotAFrame { lower: f64, threshold: f64 },

    #[error("eigen solver failed: {0}")]
    EigenSolver(String),

    #[error("exponent {0} outside [1, inf]")]
    ExponentOutOfRange(f64),

    #[error("partition step {step} does not divide modulus {n}")]
    StepDoesNotDivide { step: usize, n: usize },

    #[error("window is identically zero")]
    ZeroWindow,

    #[error("probe set is empty")]
    EmptyProbes,

    #[error("invalid sampling grid: {0}")]
    InvalidGrid(String),

    #[error("{0}")]
    Config(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

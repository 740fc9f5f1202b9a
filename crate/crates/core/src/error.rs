use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("structure constants violate the Jacobi identity")]
    JacobiViolation,

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("sampled denominator vanished after {0} retries")]
    SampleSingular(usize),

    #[error("constraint iteration exceeded its cap of {0} rounds")]
    IterationCap(usize),

    #[error("evaluation hit a singular locus: {0}")]
    SingularLocus(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

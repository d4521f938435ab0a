use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// An input value is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Sequence lengths or matrix dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The requested operation is not defined for this reset mode.
    #[error("unsupported reset mode: {0}")]
    UnsupportedMode(String),

    /// Zero-order hold discretization is undefined for this state matrix.
    #[error("singular discretization: {0}")]
    SingularDiscretization(String),

    /// An internal consistency check failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// The harness configuration could not be used.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

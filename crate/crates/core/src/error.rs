use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error)]
pub enum TycoonError {
    #[error("grid too small or invalid: M = {m}, dt = {dt} (need M >= 4, dt > 0)")]
    InvalidGrid { m: usize, dt: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("solver diverged: {0}")]
    Diverged(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, TycoonError>;

pub(crate) fn shape_err(expected: impl ToString, got: impl ToString) -> TycoonError {
    TycoonError::ShapeMismatch {
        expected: expected.to_string(),
        got: got.to_string(),
    }
}

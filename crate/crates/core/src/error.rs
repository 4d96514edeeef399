use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input (bad dimension, axis, permutation, box, ...).
    #[error("input error: {0}")]
    Input(String),
    /// The request is valid but outside what the symbolic engine can represent.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Two routes that must agree did not. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

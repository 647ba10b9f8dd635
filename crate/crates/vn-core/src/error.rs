//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an input was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A text format could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An operation was refused because the input exceeds a configured size cap.
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    /// The observed graph pair lies outside the support of the distribution,
    /// so the conditional ranking is undefined.
    #[error("input pair outside distribution support")]
    OutsideSupport,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its documented range or combination rule.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Array sizes passed to an operation do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A precision (inverse variance) that must be positive is not.
    #[error("non-positive precision: {0}")]
    NonPositivePrecision(String),

    /// File contents do not match the documented on-disk format.
    #[error("format error in {path}: {reason}")]
    Format { path: String, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Format { path: path.into(), reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error taxonomy shared across the crate.
//!
//! The split mirrors how callers are expected to react: `Structural` and
//! `Domain` mean the input itself is bad, `Precondition` means a documented
//! contract was violated (the message names the offending object),
//! `Precision` is retryable with a larger working precision, and
//! `Unsupported` marks inputs outside the implemented fragment.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape mismatch: wrong variable list, wrong dimension, malformed file.
    #[error("structural error: {0}")]
    Structural(String),

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition failed; the message names the witness.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Valid input that the implemented fragment cannot handle.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Certification failed at the working precision; retry with at least
    /// `required_precision` bits.
    #[error("precision exhausted: {message} (retry with >= {required_precision} bits)")]
    Precision {
        message: String,
        required_precision: u32,
    },

    /// Syntax error with a byte offset and the token classes that would have
    /// been accepted at that point.
    #[error("parse error at offset {offset}: {message} (expected {})", .expected.join(", "))]
    Parse {
        offset: usize,
        message: String,
        expected: Vec<String>,
    },

    /// A consistency check that should be unreachable fired.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Stable machine-readable kind tag used by the CLI and FFI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Unsupported(_) => "unsupported",
            Error::Precision { .. } => "precision",
            Error::Parse { .. } => "parse",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A size or budget guard was hit. `limit` names the guard that tripped.
    #[error("capacity exceeded: {what} (limit: {limit})")]
    Capacity { what: String, limit: String },

    /// Floating-point phase accuracy cannot be guaranteed past `horizon` terms.
    #[error("precision horizon exceeded: {what} (horizon: {horizon} terms)")]
    Precision { what: String, horizon: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: {0}")]
    Length(String),

    #[error("corrupt cache file {path}: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn capacity(what: impl Into<String>, limit: impl ToString) -> Self {
        Error::Capacity {
            what: what.into(),
            limit: limit.to_string(),
        }
    }

    pub(crate) fn precision(what: impl Into<String>, horizon: u64) -> Self {
        Error::Precision {
            what: what.into(),
            horizon,
        }
    }
}

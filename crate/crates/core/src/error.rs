use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("malformed XML at byte offset {offset}: {message}")]
    Xml { offset: u64, message: String },

    #[error("truncated or corrupt gzip stream in {name}: {source}")]
    Gzip {
        name: String,
        #[source]
        source: io::Error,
    },

    #[error("record store {0} is locked by another writer")]
    StoreLocked(PathBuf),

    #[error("corrupt record store {path}: {message}")]
    Store { path: PathBuf, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("taxonomy: {0}")]
    Taxonomy(String),

    #[error("insufficient data for {model}: need at least {required} observations, got {actual}")]
    InsufficientData {
        model: String,
        required: usize,
        actual: usize,
    },

    #[error("relative error is undefined for actual value {0}")]
    UndefinedRelativeError(f64),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

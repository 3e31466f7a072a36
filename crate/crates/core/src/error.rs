use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SqgError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SqgError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("shell index {index} outside resolved range [{min}, {max}]")]
    ShellRange { index: i32, min: i32, max: i32 },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("config error: {0}")]
    ConfigValue(String),

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error("corrupted artifact {path}: {reason}")]
    Corruption { path: PathBuf, reason: String },

    #[error("{0}")]
    Schema(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SqgError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SqgError::Io {
            path: path.into(),
            source,
        }
    }
}

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("corpus root {path:?} is not a readable directory: {reason}")]
    CorpusRoot { path: PathBuf, reason: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid path {0:?}: search path entries must be absolute directories")]
    NotAbsolute(String),

    #[error("invalid glob pattern {pattern:?}: {reason}")]
    Glob { pattern: String, reason: String },

    #[error("graph integrity error: {0}")]
    Integrity(String),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("aggregation error: {0}")]
    Aggregate(String),

    #[error("{step}: {inner}")]
    Step { step: &'static str, inner: Box<Error> },

    #[error("i/o error on {path:?}: {err}")]
    Io { path: PathBuf, err: std::io::Error },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(origin: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: origin.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            err: source,
        }
    }

    /// Wraps the error with the name of the pipeline step that produced it.
    pub fn in_step(self, step: &'static str) -> Self {
        Error::Step {
            step,
            inner: Box::new(self),
        }
    }
}

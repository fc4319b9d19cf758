use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A factorial or tabulation bound would be exceeded.
    #[error("size limit exceeded: {what} is {actual}, the bound is {bound}")]
    SizeLimit {
        what: &'static str,
        actual: u128,
        bound: u128,
    },

    #[error("index {index} out of range 0..{len}")]
    OutOfRange { index: u64, len: u64 },

    /// Arguments disagree on player count, alternative count or scoring rule.
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// Text input that could not be parsed; `position` is a 0-based character offset.
    #[error("parse error at position {position} in {input:?}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no structurally equivalent integer weights with sum <= {bound}")]
    NotFound { bound: u64 },

    #[error("missing dependency: {0}")]
    Dependency(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("encoding error: {0}")]
    Encoding(String),
}

impl Error {
    /// Short machine-readable category, used for CLI exit codes and FFI status.
    pub fn category(&self) -> &'static str {
        match self {
            Error::SizeLimit { .. } => "size-limit",
            Error::OutOfRange { .. } => "range",
            Error::Shape(_) => "shape",
            Error::Invalid(_) => "invalid",
            Error::Parse { .. } => "parse",
            Error::Contract(_) => "contract",
            Error::NotFound { .. } => "not-found",
            Error::Dependency(_) => "dependency",
            Error::Io { .. } => "io",
            Error::Encoding(_) => "encoding",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

use std::io;

use thiserror::Error;

/// Errors produced by the library.
///
/// `InvalidArgument`, `Parse`, `Validation` and `Range` describe bad input and
/// are reported by the CLI with exit status 1. `Io` and `Internal` are runtime
/// failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation error at line {line}: {msg}")]
    Validation { line: usize, msg: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by the caller's input rather than the environment.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::Parse { .. }
                | Error::Validation { .. }
                | Error::Range(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CtlError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Core(#[from] qdiscord::Error),

    /// Flag combinations that parse but make no sense together.
    #[error("usage: {0}")]
    Usage(String),
}

impl CtlError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        CtlError::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit code: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CtlError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CtlError>;

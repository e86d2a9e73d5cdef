use std::path::PathBuf;

/// Errors surfaced by the simulator library and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An operation was called with an out-of-domain argument.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration value failed validation; the message names the field.
    #[error("configuration error: {0}")]
    Config(String),

    /// A file could not be read or written.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 1 for configuration problems, 2 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) => 1,
            Error::Io { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

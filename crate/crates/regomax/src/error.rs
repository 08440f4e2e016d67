use std::path::PathBuf;

/// Errors raised by file handling and the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] regomax_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Ingest { line: u64, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Error::Usage(message.into())
    }

    /// Process exit status: 2 for usage and configuration problems, 3 for
    /// unreadable or invalid data, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use regomax_core::Error as Core;
        match self {
            Error::Usage(_) | Error::Config(_) => 2,
            Error::Core(Core::Range { .. }) => 2,
            Error::Core(Core::Convergence { .. } | Core::Spectral(_) | Core::Consistency(_)) => 4,
            _ => 3,
        }
    }
}

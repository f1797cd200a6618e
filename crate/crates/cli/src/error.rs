//! Stage errors mapped onto the documented exit statuses.

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum StageError {
    /// Exit status 2: the input could not be read.
    Unreadable { path: PathBuf, source: std::io::Error },
    /// Exit status 3: a record in the input did not parse.
    Malformed {
        path: PathBuf,
        line: usize,
        detail: String,
    },
    /// Exit status 4: the run configuration is unusable.
    Config(String),
    /// Exit status 1: anything else (output IO, internal invariants).
    Internal(String),
}

impl StageError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            StageError::Internal(_) => ExitCode::from(1),
            StageError::Unreadable { .. } => ExitCode::from(2),
            StageError::Malformed { .. } => ExitCode::from(3),
            StageError::Config(_) => ExitCode::from(4),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        StageError::Config(message.into())
    }

    pub fn internal(message: impl fmt::Display) -> Self {
        StageError::Internal(message.to_string())
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageError::Unreadable { path, source } => {
                write!(f, "cannot read {}: {source}", path.display())
            }
            StageError::Malformed { path, line, detail } => {
                write!(f, "{}:{line}: malformed record: {detail}", path.display())
            }
            StageError::Config(message) => write!(f, "configuration error: {message}"),
            StageError::Internal(message) => write!(f, "{message}"),
        }
    }
}

impl std::error::Error for StageError {}

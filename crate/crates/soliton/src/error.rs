use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {failed} of {total} checks did not pass")]
    VerificationFailed { failed: usize, total: usize },
    #[error(transparent)]
    Invalid(#[from] soliton_core::Error),
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("FileNotFound: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("ParseError: {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("WriteError: {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::Invalid(_) | CliError::Usage(_) => 2,
            CliError::FileNotFound(_) => 3,
            CliError::Parse { .. } => 4,
            CliError::Write { .. } => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

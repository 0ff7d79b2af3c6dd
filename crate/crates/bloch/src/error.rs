use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Exit status for domain and validation failures.
pub const EXIT_INVALID: i32 = 2;
/// Exit status for I/O failures.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bloch_core::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("writing output: {0}")]
    Stream(#[source] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Stream(_) => EXIT_IO,
            _ => EXIT_INVALID,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

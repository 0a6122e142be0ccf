use std::path::Path;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("partition failure: {0}")]
    Partition(String),

    #[error(transparent)]
    Other(hyperblock::Error),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
            CliError::Partition(_) => 4,
            CliError::Other(_) => 1,
        })
    }
}

impl From<hyperblock::Error> for CliError {
    fn from(e: hyperblock::Error) -> Self {
        match e {
            hyperblock::Error::InvalidArgument(msg) => CliError::Invalid(msg),
            hyperblock::Error::Parse { line, message } => {
                CliError::Invalid(format!("line {line}: {message}"))
            }
            hyperblock::Error::PartitionFailure(msg) => CliError::Partition(msg),
            other => CliError::Other(other),
        }
    }
}

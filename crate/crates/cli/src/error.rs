use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Every variant renders on one line as `error[<kind>]: <reason>`.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("error[parse]: line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("error[validation]: {0}")]
    Validation(String),

    #[error("error[io]: {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("error[engine]: {0}")]
    Engine(#[from] hetnet_core::Error),

    #[error("error[csv]: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Validation(_) => "validation",
            CliError::Io { .. } => "io",
            CliError::Engine(_) => "engine",
            CliError::Csv(_) => "csv",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

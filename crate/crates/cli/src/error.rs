use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] steerlab::Error),
}

impl CliError {
    /// 2 for bad input or configuration, 3 for numerical trouble.
    pub fn exit_code(&self) -> u8 {
        use steerlab::Error as E;
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Parse { .. } => 2,
            CliError::Write { .. } => 3,
            CliError::Core(e) => match e {
                E::OptimizerFailed { .. } | E::UndefinedConditional { .. } => 3,
                E::Io(_) | E::Csv(_) => 3,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

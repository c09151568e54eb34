use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Model {
        context: String,
        #[source]
        source: eprsim::Error,
    },

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn model(context: impl Into<String>) -> impl FnOnce(eprsim::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Model { context, source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Model { .. } | CliError::Io { .. } => {
                ExitCode::from(1)
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

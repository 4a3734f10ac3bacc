use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("config {path}: {source}")]
    Config {
        path: String,
        #[source]
        source: poncelet_core::ParseError,
    },

    #[error("{0}")]
    Engine(#[from] poncelet_core::Error),

    #[error("io: {0}")]
    Io(#[from] io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Failed(String),

    #[error("{0}")]
    NoSolution(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 64,
            CliError::NoSolution(_) => 2,
            CliError::Engine(poncelet_core::Error::NoStationary { .. }) => 2,
            CliError::Engine(poncelet_core::Error::MissingCenter(_)) => 64,
            _ => 1,
        }
    }
}

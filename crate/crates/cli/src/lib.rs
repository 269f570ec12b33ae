//! Library side of the `eacc` command-line tool: grid parsing, record
//! serialization, the oracle verification harness and the subcommands.

pub mod commands;
pub mod grid;
pub mod output;
pub mod verify;

use std::path::PathBuf;
use thiserror::Error;

/// Process exit status for each error class.
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Estimation(#[from] eacc_core::Error),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

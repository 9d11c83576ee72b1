//! Library half of the `hyperzeta` command-line tool.
//!
//! [`cli::Cli`] parses arguments into a [`config::JobConfig`], and
//! [`jobs::run`] executes it and writes the artifact.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod jobs;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("computation error: {0}")]
    Computation(#[from] hyperzeta::Error),
}

impl CliError {
    /// Input files that cannot be read or parsed count as i/o failures.
    pub fn from_store(e: hyperzeta::Error) -> Self {
        match e {
            hyperzeta::Error::Io { .. } | hyperzeta::Error::ParseError { .. } | hyperzeta::Error::SchemaMismatch(_) => {
                CliError::Io(e.to_string())
            }
            other => CliError::Computation(other),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Computation(_) => 4,
        }
    }
}

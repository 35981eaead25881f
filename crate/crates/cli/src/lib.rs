//! Command implementations behind the `ffal` binary. Parsing lives in
//! `args`, the work in `commands`; everything here is also callable as a
//! library so harnesses can drive runs in-process.

pub mod args;
pub mod commands;
pub mod config;
pub mod manifest;

use std::fmt;

/// Exit-code contract: 0 success, 2 usage error, 1 runtime error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ffal::session::SessionError> for CliError {
    fn from(e: ffal::session::SessionError) -> Self {
        match e {
            ffal::session::SessionError::InvalidConfig(msg) => CliError::Usage(msg),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<ffal::dataio::DataIoError> for CliError {
    fn from(e: ffal::dataio::DataIoError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<ffal::FfError> for CliError {
    fn from(e: ffal::FfError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

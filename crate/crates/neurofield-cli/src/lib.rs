//! Command-line front end: config parsing, experiment dispatch, and the
//! on-disk formats (binary snapshots with a text header sidecar, CSV series).

pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

/// CLI-level error: configuration problems carry a line number when they
/// come from a config file; everything else wraps the solver or the OS.
#[derive(Debug)]
pub enum CliError {
    Config { line: Option<usize>, message: String },
    Core(neurofield::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config {
                line: Some(line),
                message,
            } => write!(f, "config line {line}: {message}"),
            CliError::Config {
                line: None,
                message,
            } => write!(f, "config: {message}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<neurofield::Error> for CliError {
    fn from(e: neurofield::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// 1 for invalid inputs, 2 for runtime or numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Core(e) if e.is_validation() => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

//! Command-line companion to `threeperm-core`: file formats, parallel
//! drivers, verification sweeps and reports.

pub mod format;
pub mod report;
pub mod solve;
pub mod verify;

/// Version stamped into every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("{0}: {1}")]
    Parse(String, #[source] format::ParseError),
    #[error(transparent)]
    Core(#[from] threeperm_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io("csv".into(), e.into())
    }
}

impl CliError {
    /// Process exit code: IO failures, malformed input and bad arguments
    /// all map to 2.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

//! Files, reports and the command line on top of [`rds_core`].

pub mod cli;
pub mod format;
pub mod report;
pub mod stats;

pub use rds_core;

#[derive(Debug, thiserror::Error)]
pub enum KitError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Core(#[from] rds_core::Error),
}

impl KitError {
    /// Process exit code: 2 for bad input, 3 for size guards.
    pub fn exit_code(&self) -> i32 {
        match self {
            KitError::Core(rds_core::Error::TooLarge { .. } | rds_core::Error::TooManyStates { .. }) => 3,
            _ => 2,
        }
    }
}

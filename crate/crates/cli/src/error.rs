use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error(transparent)]
    Compute(#[from] born_hierarchy::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Compute(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

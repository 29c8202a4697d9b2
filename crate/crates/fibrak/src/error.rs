use std::io;

/// Everything the command surface can fail with, mapped to exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}:{col}: {msg}")]
    Parse { path: String, line: usize, col: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] fibrak_core::Error),
}

impl CliError {
    pub fn parse(path: &str, line: usize, col: usize, msg: impl Into<String>) -> Self {
        CliError::Parse { path: path.to_owned(), line, col, msg: msg.into() }
    }

    /// 1 for a failed property, 2 for invalid input, 3 for a budget trip.
    pub fn exit_code(&self) -> u8 {
        use fibrak_core::Error as E;
        match self {
            CliError::Core(E::SearchBudgetExceeded { .. }) => 3,
            CliError::Core(E::TheoremViolation(_) | E::InternalDisagreement(_)) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

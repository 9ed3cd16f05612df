use std::io;
use std::path::PathBuf;

use pcombine_core::Error as CoreError;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Input = 2,
    Domain = 3,
    Numeric = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{}: at {pointer}: {message}", path.display())]
    Schema {
        path: PathBuf,
        pointer: String,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("writing output: {0}")]
    Output(String),

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Schema { .. }
            | CliError::Usage(_) => ExitCode::Input,
            CliError::Output(_) => ExitCode::Input,
            CliError::Core(e) if e.is_numerical() => ExitCode::Numeric,
            CliError::Core(CoreError::InvalidPValue { .. } | CoreError::Empty) => ExitCode::Input,
            CliError::Core(_) => ExitCode::Domain,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

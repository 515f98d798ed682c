use cloak_core::CloakError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("solver failure: {0}")]
    Solver(#[from] CloakError),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl CliError {
    /// 2 for bad input, 3 for numerical failures, 4 for failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(e) if is_input_error(e) => 2,
            CliError::Solver(_) | CliError::Io { .. } | CliError::Serialize(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

fn is_input_error(e: &CloakError) -> bool {
    matches!(e, CloakError::InvalidParameter(_) | CloakError::Domain(_))
}

pub type Result<T> = std::result::Result<T, CliError>;

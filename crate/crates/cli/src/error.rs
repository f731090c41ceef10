use thiserror::Error;

/// Process exit codes: 0 ok, 2 validation, 3 solver failure,
/// 4 verification failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Verification(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<tns_core::Error> for CliError {
    fn from(e: tns_core::Error) -> Self {
        use tns_core::Error::*;
        match e {
            Blowup { .. } | PicardNoConvergence { .. } => CliError::Solver(e.to_string()),
            Io { .. } => CliError::Solver(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

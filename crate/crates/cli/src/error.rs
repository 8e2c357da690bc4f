use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Core(#[from] cdc_core::Error),
}

impl CliError {
    /// 1 for a failed verification, 2 for anything the user got wrong.
    pub fn exit_code(&self) -> i32 {
        use cdc_core::Error as E;
        match self {
            CliError::Verification(_) => 1,
            CliError::Core(E::Construction(_)) => 1,
            _ => 2,
        }
    }
}

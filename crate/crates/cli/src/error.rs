use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] telegraph::Error),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {failed} of {total} rows beyond {threshold}·SE")]
    VerificationFailed { failed: usize, total: usize, threshold: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

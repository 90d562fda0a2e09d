use photodress::ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error(transparent)]
    Io(#[from] anyhow::Error),
}

impl CliError {
    /// 0 success, 1 usage, 2 verification failure, 3 model validity.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Model(
                ModelError::IncompleteParametrization(_)
                | ModelError::InconsistentParametrization(_),
            ) => 1,
            CliError::Verify(_) => 2,
            CliError::Model(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

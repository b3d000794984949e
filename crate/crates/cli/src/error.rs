use qudit_entanglement::Error as CoreError;

/// Failure with the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("self-test failed: {0}")]
    SelfTest(String),
    #[error("{0}")]
    Parse(String),
    #[error("normalization error: {0}")]
    Normalization(String),
    #[error("unsupported dimensions: {0}")]
    Unsupported(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SelfTest(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Normalization(_) => 3,
            CliError::Unsupported(_) => 4,
            CliError::InvalidDensity(_) => 5,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotNormalized(_) => CliError::Normalization(e.to_string()),
            CoreError::NotQubitSystem(_) => CliError::Unsupported(e.to_string()),
            CoreError::InvalidDensity(_) | CoreError::NotHermitian(_) => CliError::InvalidDensity(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

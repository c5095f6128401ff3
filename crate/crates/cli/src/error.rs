use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("did not converge: {0}")]
    NonConvergence(String),
    #[error("{0}")]
    Strict(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Strict(_) => 4,
            CliError::Io(_) | CliError::Csv(_) => 1,
        })
    }
}

impl From<bjscc::Error> for CliError {
    fn from(e: bjscc::Error) -> Self {
        match e {
            bjscc::Error::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

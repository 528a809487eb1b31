use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("missing outputs: {0}")]
    MissingOutputs(String),
    #[error("{0}")]
    Core(cuspidal::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<cuspidal::Error> for CliError {
    fn from(e: cuspidal::Error) -> CliError {
        match e {
            cuspidal::Error::Budget { .. } | cuspidal::Error::BallTooSmall { .. } => CliError::Budget(e.to_string()),
            e => CliError::Core(e),
        }
    }
}

impl CliError {
    /// 0 success, 1 assertion or runtime failure, 2 invalid input, 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::MissingOutputs(_) => 2,
            CliError::Budget(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

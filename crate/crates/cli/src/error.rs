use thiserror::Error;

/// Everything that ends a run early. Assertion failures are not errors:
/// they are reported alongside the table.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("compute budget exceeded: {0}")]
    Budget(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => crate::EXIT_USAGE,
            CliError::Budget(_) => crate::EXIT_BUDGET,
        }
    }
}

impl From<ergolab::Error> for CliError {
    fn from(e: ergolab::Error) -> Self {
        match e {
            ergolab::Error::BudgetExceeded(msg) | ergolab::Error::IndexOverflow(msg) => CliError::Budget(msg),
            other => CliError::Usage(other.to_string()),
        }
    }
}

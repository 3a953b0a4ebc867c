use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("invalid vertex: {0}")]
    InvalidVertex(String),
    #[error("vertex index does not fit in 64 bits: {0}")]
    IndexOverflow(String),
    #[error("compute budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

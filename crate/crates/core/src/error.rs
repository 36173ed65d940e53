//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmcError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid height: {0}")]
    InvalidHeight(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("unproved regime: {0}")]
    UnprovedRegime(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("straightening did not terminate after {0} steps")]
    NonTermination(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, QmcError>;

impl From<std::io::Error> for QmcError {
    fn from(e: std::io::Error) -> Self {
        QmcError::Io(e.to_string())
    }
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("inconsistent cohomology data: {0}")]
    Inconsistent(String),

    #[error("no certified convention: {0}")]
    Uncertified(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

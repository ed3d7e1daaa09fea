use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("threshold must be positive")]
    NonPositiveThreshold,
    #[error("operation requires finitely supported (zero-tail) sequences")]
    TailedOperand,
    #[error("exponent s must satisfy s > 1")]
    ExponentOutOfRange,
    #[error("total masses differ")]
    UnequalMasses,
    #[error("catalyst entries must all be positive")]
    NonPositiveCatalyst,
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid value set: {0}")]
    InvalidValueSet(String),
    #[error("objective undefined: {0}")]
    ObjectiveUndefined(String),
    #[error("wrong regime: {0}")]
    WrongRegime(String),
    #[error("invalid source: {0}")]
    InvalidSource(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { path: path.into(), message: message.into() }
    }
}

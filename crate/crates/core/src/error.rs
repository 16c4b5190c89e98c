use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Two pieces of data that must agree in size do not.
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    /// Data that is supposed to be a Mackey functor violates an axiom.
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
    /// Two independent computations of the same quantity disagree.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    /// A fixed-width integer computation left its range.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("computation failed: {0}")]
    Computation(String),
}

impl Error {
    /// True for errors caused by malformed or out-of-domain caller input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::InvalidInput(_) | Error::Precondition(_) | Error::MissingData(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

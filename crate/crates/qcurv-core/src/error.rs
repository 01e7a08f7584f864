use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("infinite metric: {0}")]
    InfiniteMetric(String),
    #[error("invalid specification at {pointer}: {message}")]
    Spec { pointer: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub fn spec(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

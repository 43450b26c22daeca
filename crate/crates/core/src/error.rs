use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("floating-point overflow: {0}")]
    Overflow(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),

    #[error("underdetermined configuration: {0}")]
    Underdetermined(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

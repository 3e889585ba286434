use thiserror::Error;

pub type Result<T, E = DuelError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DuelError {
    /// An argument lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),
    /// An iterative method failed to reach its tolerance.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl DuelError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        DuelError::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        DuelError::Numeric(msg.into())
    }
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DceError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("inadmissible mode: {0}")]
    Constraint(String),

    #[error("root search failed: {0}")]
    Search(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("point outside the cavity: {0}")]
    Domain(String),

    #[error("basis truncation too small: {0}")]
    Truncation(String),

    #[error("integration accuracy check failed: {0}")]
    Accuracy(String),

    #[error("CFL condition violated: {0}")]
    Cfl(String),

    #[error("solution blew up: {0}")]
    BlowUp(String),
}

pub type Result<T> = std::result::Result<T, DceError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> DceError {
    DceError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A number-theoretic hypothesis of an experiment failed (e.g. a gcd condition).
    #[error("hypothesis violated: {name} ({detail})")]
    Hypothesis { name: &'static str, detail: String },

    #[error("resource guard: {what} needs {requested}, limit is {limit}")]
    ResourceGuard {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("growth function not admissible: {0}")]
    NotAdmissible(String),

    /// A numeric audit of an inequality found a violation.
    #[error("audit violation: {0}")]
    AuditViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

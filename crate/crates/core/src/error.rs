use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A precondition the caller is responsible for was not met.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The enumeration would exceed the configured evaluation budget.
    #[error("resource budget exceeded: more than {budget} candidate evaluations required")]
    Budget { budget: u64 },
    /// An internal certificate failed. Indicates a bug.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

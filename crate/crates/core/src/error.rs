use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or unresolvable input (unknown ids, bad colors, wrong sizes).
    #[error("input error: {0}")]
    Input(String),
    /// Two edges that were asked to compose do not meet.
    #[error("composition error: {0}")]
    Composition(String),
    /// The operation was called outside its domain (e.g. a non-hereditary set).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A configured size bound would be exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A brute-force check could not reach a verdict with the given budget.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

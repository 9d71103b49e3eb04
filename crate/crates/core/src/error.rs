use thiserror::Error;

/// Failures that depend on the mathematical input rather than on caller bugs.
///
/// Dimension mismatches are contract violations and panic instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A mathematical precondition does not hold (degenerate form, singular
    /// matrix, dependent basis, ...).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The input is well formed but lies outside the configurations we can
    /// decide (e.g. SO(n) away from the standard flag).
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// An exhaustive oracle was asked to enumerate beyond its size guard.
    #[error("oracle guard exceeded: {0}")]
    Guard(String),
    /// A computed object failed one of its own validators.
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

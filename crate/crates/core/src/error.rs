use thiserror::Error;

/// Errors surfaced by construction and validation entry points.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    /// A runtime guard that must never fire on valid inputs did fire.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A measure violates its construction invariants (mass, ordering, ranges).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// An argument is outside the documented domain of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two boundary traces live on incompatible grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The requested computation is not defined for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

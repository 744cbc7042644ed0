//! Error types shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enum. Variants mirror the failure modes of the
/// library layers: geometry problems, bad parameters, broken basis
/// constructions, numerical inconsistencies and degenerate data.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A dimension does not fit the operation (wrong d, not a power of
    /// two/four, above the supported cap, mismatched operands).
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A matrix or table has the wrong shape (e.g. non-square input).
    #[error("shape error: {0}")]
    Shape(String),

    /// A parameter is outside its admissible range (e.g. p ∉ [0, 1]).
    #[error("parameter error: {0}")]
    Param(String),

    /// A basis or collection failed its construction-time validation.
    /// The message names the offending vector.
    #[error("construction error: {0}")]
    Construction(String),

    /// A numerical consistency check failed badly enough to signal a
    /// broken state or basis rather than round-off.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A quantity is undefined on the given data (e.g. Pearson
    /// correlation with a zero-variance marginal).
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// An operation received no data to work on (e.g. zero total counts).
    #[error("empty data: {0}")]
    EmptyData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

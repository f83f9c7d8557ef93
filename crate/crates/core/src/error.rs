//! Error type shared by every table operation in this crate.

use thiserror::Error;

/// Errors produced when constructing or combining tables.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableError {
    /// A table must have at least two rows and two columns; anything
    /// smaller has no interaction structure to decompose.
    #[error("table of {rows}x{cols} is too small; at least 2x2 is required")]
    DimsTooSmall { rows: usize, cols: usize },

    /// The number of supplied entries does not match the declared shape.
    #[error("{len} entries do not fill a {rows}x{cols} table")]
    LengthMismatch { len: usize, rows: usize, cols: usize },

    /// Probability-table entries must be strictly positive and finite.
    /// Zeros signal that the caller must apply a smoothing policy first.
    #[error("entry ({row},{col}) = {value} must be strictly positive and finite")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },

    /// A clr-plane entry was NaN or infinite.
    #[error("clr entry ({row},{col}) = {value} is not finite")]
    NonFiniteEntry { row: usize, col: usize, value: f64 },

    /// Clr values must sum to zero (up to a size-scaled tolerance).
    #[error("clr entries sum to {sum}, expected 0")]
    NotCentered { sum: f64 },

    /// Two tables entering a binary operation have different shapes.
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    /// The operation is only defined for square tables.
    #[error("operation requires a square table, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// The geodesic parameter lies outside [0, 1].
    #[error("geodesic parameter {lambda} is outside [0, 1]")]
    LambdaOutOfRange { lambda: f64 },

    /// A count table must contain at least one observation.
    #[error("count table must contain at least one observation")]
    EmptyCounts,

    /// Generator parameters failed validation.
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

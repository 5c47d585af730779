use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by matrix, hierarchy, and stream operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Matrix dimensions must be at least 1x1.
    #[error("invalid dimensions {nrows} x {ncols}: both must be nonzero")]
    InvalidDimension { nrows: u64, ncols: u64 },

    /// An entry addressed a key outside the matrix bounds.
    #[error("index ({row}, {col}) out of bounds for a {nrows} x {ncols} matrix")]
    IndexOutOfBounds {
        row: u64,
        col: u64,
        nrows: u64,
        ncols: u64,
    },

    /// Element-wise operations require identical dimensions.
    #[error("dimension mismatch: {left_rows} x {left_cols} vs {right_rows} x {right_cols}")]
    DimensionMismatch {
        left_rows: u64,
        left_cols: u64,
        right_rows: u64,
        right_cols: u64,
    },

    /// The monoid reported overflow while combining two values for a key.
    #[error("value overflow combining entry ({row}, {col})")]
    Overflow { row: u64, col: u64 },

    /// A cut schedule violated its invariants (positive, strictly increasing).
    #[error("invalid cut schedule: {reason}")]
    InvalidCuts { reason: String },

    /// A stream configuration violated its invariants.
    #[error("invalid stream config: {reason}")]
    InvalidStreamConfig { reason: String },
}

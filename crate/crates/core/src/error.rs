//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the decomposition, resampling, and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("window length {window} out of range: need 2 <= L <= floor(N/2) = {max} for N = {n}")]
    WindowOutOfRange { window: usize, n: usize, max: usize },

    #[error("non-finite value at position {index}")]
    NonFiniteInput { index: usize },

    #[error("series is empty")]
    EmptySeries,

    #[error("eigen decomposition did not converge")]
    NumericalFailure,

    #[error("component index {index} outside 1..={rank}")]
    IndexOutOfRank { index: usize, rank: usize },

    #[error("grouping must contain at least one component index")]
    EmptyGrouping,

    #[error("index sets must be disjoint: component {index} appears twice")]
    OverlappingGroups { index: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate component: {0}")]
    DegenerateComponent(String),

    #[error("taper window evaluates to zero at every block position")]
    DegenerateWindow,

    #[error("taper window violates its admissibility assumptions: {0}")]
    InvalidWindow(String),

    #[error("block size {ell} too large for series of length {n}")]
    BlockTooLarge { ell: usize, n: usize },

    #[error("auxiliary sequence `{0}` is not registered")]
    AuxUnavailable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    ParseError {
        row: usize,
        column: String,
        value: String,
    },

    #[error("column `{0}` not present in input")]
    ColumnNotFound(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to: 1 for numerical
    /// failures, 2 for input/configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalFailure | Error::DegenerateComponent(_) => 1,
            _ => 2,
        }
    }
}

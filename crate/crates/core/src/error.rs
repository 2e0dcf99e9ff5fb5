use thiserror::Error;

use crate::partition::{GrassmannianShape, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Grassmannian G({k},{n}): need 0 < k < n")]
    InvalidShape { k: usize, n: usize },

    #[error("partition {partition} does not fit in the {rows}x{cols} box of {shape}")]
    BoxViolation {
        partition: Partition,
        shape: GrassmannianShape,
        rows: usize,
        cols: usize,
    },

    #[error("parts must be weakly decreasing: {0:?}")]
    NotWeaklyDecreasing(Vec<usize>),

    #[error("empty partition is not a Schubert condition")]
    EmptyCondition,

    #[error("boundary string {bits:?} must have length {n} with exactly {k} ones")]
    Boundary { bits: String, k: usize, n: usize },

    #[error("problem on {shape} has total codimension {weight}, expected {expected}")]
    Dimension {
        shape: GrassmannianShape,
        weight: usize,
        expected: usize,
    },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("permutation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("choice tree exceeds the vertex budget of {0}")]
    TreeBudget(usize),

    #[error("leaf count overflowed 128 bits")]
    CountOverflow,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the caller's input, false for failures of
    /// the library's own invariants.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::CountOverflow)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

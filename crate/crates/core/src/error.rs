use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("radicand must be non-negative")]
    NegativeRadicand,
    #[error("radicand must be positive")]
    NonPositiveRadicand,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("fixed columns are linearly dependent")]
    DependentFixedColumns,
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("equality system is inconsistent")]
    Inconsistent,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("determinant budget of {budget} exceeded")]
    SizeLimitExceeded { budget: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("starting basis is not primal feasible")]
    InfeasibleStart,
    #[error("constraint rows are linearly dependent")]
    RedundantRows,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TardosError {
    #[error("no coordinate of the rounded solution reaches {threshold} (iteration {iteration}, x'' = {x:?})")]
    EmptyJ {
        iteration: usize,
        threshold: usize,
        x: Vec<String>,
    },
    #[error("fixed set grew past the row count ({size} > {rows})")]
    FixedSetOverflow { size: usize, rows: usize },
    #[error("unexpected outcome: {0}")]
    Unexpected(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for enumeration ({count} candidate bases)")]
    TooLarge { count: u128 },
    #[error("constraint matrix must have full row rank")]
    RankDeficient,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MhxError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("not a grading: {0}")]
    NotGrading(String),
    #[error("not a mixed Hodge structure: {0}")]
    NotMixedHodge(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// A computed object failed a check that the mathematics guarantees.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, MhxError>;

pub(crate) fn dim_err(what: impl Into<String>) -> MhxError {
    MhxError::DimensionMismatch(what.into())
}

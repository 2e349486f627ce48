use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not diagonalizable within tolerance (eigenvector condition estimate {condition:.3e})")]
    Defective { condition: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("invalid model: {0}")]
    InvalidModel(ValidationReport),

    #[error("steady state is not unique (second-smallest |eigenvalue| {gap:.3e} relative to spectral radius)")]
    DegenerateSteadyState { gap: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("H_S vanishes; use the classical-limit path")]
    ClassicalLimit,

    #[error("relative variance undefined for zero mean count")]
    UndefinedRatio,
}

impl Error {
    /// True for failures caused by the numerics rather than by invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Defective { .. }
                | Error::Singular
                | Error::NoConvergence(_)
                | Error::DegenerateSteadyState { .. }
                | Error::Numerical(_)
        )
    }
}

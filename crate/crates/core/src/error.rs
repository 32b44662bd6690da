use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid face index: {0}")]
    InvalidFace(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration would visit {terms} terms, above the budget of {budget}")]
    BudgetExceeded { terms: u128, budget: u128 },

    #[error("cone rays are linearly dependent (rank {rank} < {rays} rays)")]
    NotSimplicial { rank: usize, rays: usize },

    #[error("degenerate cone: {0}")]
    DegenerateCone(String),

    #[error("face {0} missing from the measure map")]
    MissingFace(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("root {index} misses the residual bound: relative residual {residual:e}")]
    RootPrecision { index: usize, residual: f64 },

    #[error("internal numerical error: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::RootPrecision { .. } | Error::Internal(_)
        )
    }
}

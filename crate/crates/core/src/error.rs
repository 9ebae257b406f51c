use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A contract or configuration violates one of its invariants.
    #[error("invalid contract: {0}")]
    InvalidContract(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Argument outside the domain of a mathematical function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finding for degree {degree} Jacobi polynomial did not converge: {reason}")]
    RootConvergence { degree: usize, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("spot {spot} lies outside the barrier corridor [{lower}, {upper}]")]
    SpotOutsideCorridor { spot: f64, lower: f64, upper: f64 },

    #[error("case data: {0}")]
    CaseData(String),
}

impl Error {
    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidContract(_)
                | Error::InvalidParameter(_)
                | Error::Domain(_)
                | Error::SpotOutsideCorridor { .. }
                | Error::DimensionMismatch { .. }
        )
    }
}

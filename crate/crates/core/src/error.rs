use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    Asymmetric { max_asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("covariance violates the uncertainty principle (min eigenvalue of V + iΩ = {min_eigenvalue:e})")]
    Unphysical { min_eigenvalue: f64 },

    #[error("passive transformation is not unitary (defect {defect:e})")]
    NonUnitary { defect: f64 },

    #[error("gain too large to exponentiate reliably (‖Mz‖₁ = {norm})")]
    GainOverflow { norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

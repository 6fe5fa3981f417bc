//! Gaussian continuous-variable states from concurrent parametric processes:
//! covariance construction, symplectic spectra, PPT tests and variance-bound
//! entanglement criteria.

pub mod criteria;
pub mod dd;
pub mod error;
pub mod factory;
pub mod family;
pub mod gaussian;
pub mod linalg;
pub mod oracle;
pub mod scalar;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use family::Family;
pub use scalar::Real;

//! Covariance matrices of N-mode Gaussian states and their symplectic analysis.
//!
//! Conventions: quadratures `X = a + a†`, `Y = (a − a†)/i`, so the vacuum has
//! covariance `I` and `[X, Y] = 2i`. Vectors are ordered `(X₁..X_N, Y₁..Y_N)`
//! and the symplectic form is `Ω = [[0, I], [−I, 0]]`.

mod covariance;
mod io;
mod partition;
mod ppt;
mod spectrum;

pub use covariance::{
    symplectic_form, validate_covariance, CovarianceMatrix, SymplecticForm, ValidityReport, PHYSICAL_TOL,
    SYMMETRY_REJECT_TOL,
};
pub use io::{CovarianceJson, ORDERING_XXYY};
pub use partition::{enumerate_bipartitions, ModePartition};
pub use ppt::{partial_transpose, ppt_report, reflect_y, EntanglementReport, Verdict, DEFAULT_PPT_TOL};
pub use spectrum::{symplectic_spectrum, SymplecticSpectrum};

pub(crate) use covariance::omega_times;

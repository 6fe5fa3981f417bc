use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, max_asymmetry, symmetrize};
use crate::scalar::Real;

/// Asymmetry above which a matrix is rejected outright rather than symmetrised.
pub const SYMMETRY_REJECT_TOL: f64 = 1e-9;
/// Allowed negativity of the smallest eigenvalue of `V + iΩ`.
pub const PHYSICAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

pub fn symplectic_form(n_modes: usize) -> Result<SymplecticForm> {
    if n_modes == 0 {
        return invalid("symplectic form needs at least one mode");
    }
    let n = n_modes;
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(j, n + j)] = 1.0;
        m[(n + j, j)] = -1.0;
    }
    Ok(SymplecticForm { n_modes, matrix: m })
}

/// `Ω·M` without forming Ω.
pub(crate) fn omega_times<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let n = m.nrows() / 2;
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| if i < n { m[(i + n, j)] } else { -m[(i - n, j)] })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub symmetric: bool,
    pub physical: bool,
    /// Smallest eigenvalue of the Hermitian matrix `V + iΩ`.
    pub min_eig_of_v_plus_i_omega: f64,
    pub max_asymmetry: f64,
    /// Smallest single-mode determinant `V_xx V_yy − V_xy²`; at least 1 for physical states.
    pub min_marginal_det: f64,
}

fn check_shape<T>(m: &DMatrix<T>) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c {
        return invalid(format!("covariance must be square, got {r}×{c}"));
    }
    if r == 0 || r % 2 != 0 {
        return invalid(format!("covariance dimension must be even and positive, got {r}"));
    }
    Ok(r / 2)
}

/// Checks symmetry and the uncertainty relation `V + iΩ ≥ 0`.
///
/// The Hermitian eigenproblem is solved through its real embedding
/// `[[V, −Ω], [Ω, V]]`, whose spectrum is that of `V + iΩ` with every
/// eigenvalue doubled.
pub fn validate_covariance<T: Real>(m: &DMatrix<T>) -> Result<ValidityReport> {
    let n = check_shape(m)?;
    let asym = max_asymmetry(m);
    if !(asym <= SYMMETRY_REJECT_TOL) {
        return Err(Error::Asymmetric { max_asymmetry: asym });
    }
    let v = symmetrize(m);
    if v.iter().any(|x| !x.is_finite()) {
        return invalid("covariance has non-finite entries");
    }

    let d = 2 * n;
    let mut embed = DMatrix::<T>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            embed[(i, j)] = v[(i, j)];
            embed[(d + i, d + j)] = v[(i, j)];
        }
    }
    for j in 0..n {
        // Ω[j, n+j] = 1, Ω[n+j, j] = −1; upper-right block is −Ω, lower-left is Ω.
        embed[(j, d + n + j)] = -T::one();
        embed[(n + j, d + j)] = T::one();
        embed[(d + j, n + j)] = T::one();
        embed[(d + n + j, j)] = -T::one();
    }
    let (values, _) = linalg::symmetric_eigen(&embed);
    let min_eig = values[0].to_f64();

    let min_marginal_det = (0..n)
        .map(|j| (v[(j, j)] * v[(n + j, n + j)] - v[(j, n + j)] * v[(j, n + j)]).to_f64())
        .fold(f64::INFINITY, f64::min);

    Ok(ValidityReport {
        symmetric: asym <= 1e-12,
        physical: min_eig >= -PHYSICAL_TOL && min_marginal_det >= 1.0 - PHYSICAL_TOL,
        min_eig_of_v_plus_i_omega: min_eig,
        max_asymmetry: asym,
        min_marginal_det,
    })
}

/// A validated covariance matrix. The scalar type defaults to `f64`; use
/// [`DoubleDouble`](crate::DoubleDouble) for strongly squeezed states.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix<T: Real = f64> {
    n_modes: usize,
    entries: DMatrix<T>,
}

impl<T: Real> CovarianceMatrix<T> {
    /// Validates and symmetrises `entries`.
    pub fn new(entries: DMatrix<T>) -> Result<Self> {
        let report = validate_covariance(&entries)?;
        if !report.physical {
            return Err(Error::Unphysical {
                min_eigenvalue: report.min_eig_of_v_plus_i_omega.min(report.min_marginal_det - 1.0),
            });
        }
        Ok(Self::from_trusted(entries))
    }

    /// Skips the physicality check; used for matrices that are physical by construction.
    pub(crate) fn from_trusted(entries: DMatrix<T>) -> Self {
        let n_modes = entries.nrows() / 2;
        Self {
            n_modes,
            entries: symmetrize(&entries),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)].to_f64()
    }

    pub fn to_f64(&self) -> CovarianceMatrix<f64> {
        CovarianceMatrix {
            n_modes: self.n_modes,
            entries: linalg::to_f64_matrix(&self.entries),
        }
    }

    pub fn validate(&self) -> Result<ValidityReport> {
        validate_covariance(&self.entries)
    }

    /// `dᵀ V d` for a real coefficient vector.
    pub fn quadratic_form(&self, d: &[f64]) -> Result<T> {
        if d.len() != self.entries.nrows() {
            return invalid(format!("vector length {} does not match dimension {}", d.len(), self.entries.nrows()));
        }
        let dv: Vec<T> = d.iter().map(|&x| T::from_f64(x)).collect();
        let mut acc = T::zero();
        for (i, &di) in dv.iter().enumerate() {
            if di.is_zero() {
                continue;
            }
            let mut row = T::zero();
            for (j, &dj) in dv.iter().enumerate() {
                row += self.entries[(i, j)] * dj;
            }
            acc += di * row;
        }
        Ok(acc)
    }
}

impl CovarianceMatrix<f64> {
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return invalid("vacuum needs at least one mode");
        }
        Ok(Self::from_trusted(linalg::identity(2 * n_modes)))
    }

    pub fn from_row_slice(n_modes: usize, entries: &[f64]) -> Result<Self> {
        let d = 2 * n_modes;
        if n_modes == 0 || entries.len() != d * d {
            return invalid(format!("expected {} entries for {} modes, got {}", d * d, n_modes, entries.len()));
        }
        Self::new(DMatrix::from_row_slice(d, d, entries))
    }

    /// Raises the precision, e.g. to run spectra in double-double.
    pub fn cast<U: Real>(&self) -> CovarianceMatrix<U> {
        CovarianceMatrix {
            n_modes: self.n_modes,
            entries: linalg::from_f64_matrix(&self.entries),
        }
    }
}

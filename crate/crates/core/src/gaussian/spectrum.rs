use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::covariance::omega_times;
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, symmetrize};
use crate::scalar::Real;

/// Symplectic eigenvalues, stored in descending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("empty spectrum");
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return invalid("symplectic eigenvalues must be finite and positive");
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ascending(&self) -> Vec<f64> {
        self.values.iter().rev().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    /// Eigenvalues strictly below `1 − tol`, ascending.
    pub fn sub_unity(&self, tol: f64) -> Vec<f64> {
        self.values.iter().rev().copied().filter(|&v| v < 1.0 - tol).collect()
    }

    /// Largest elementwise distance to another spectrum of the same length.
    pub fn max_deviation(&self, other: &SymplecticSpectrum) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for SymplecticSpectrum {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::from_values(v)
    }
}

impl From<SymplecticSpectrum> for Vec<f64> {
    fn from(s: SymplecticSpectrum) -> Self {
        s.values
    }
}

/// Symplectic spectrum of a symmetric positive-definite `2N×2N` matrix.
///
/// `A = V^{1/2} Ω V^{1/2}` is antisymmetric with eigenvalues `±iν`, so its
/// singular values are the `ν`, each appearing twice.
pub fn symplectic_spectrum<T: Real>(m: &DMatrix<T>) -> Result<SymplecticSpectrum> {
    let (r, c) = m.shape();
    if r != c || r == 0 || r % 2 != 0 {
        return invalid(format!("expected an even square matrix, got {r}×{c}"));
    }
    let v = symmetrize(m);
    let (values, vectors) = linalg::symmetric_eigen(&v);
    let smallest = values[0];
    if !(smallest.to_f64() > 0.0) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: smallest.to_f64(),
        });
    }
    let root = linalg::reassemble(&values, &vectors, |x| x.sqrt());
    let a = &root * omega_times(&root);
    let s = linalg::singular_values(a);
    let half = T::from_f64(0.5);
    let nus = s.chunks(2).map(|p| ((p[0] + p[1]) * half).to_f64()).collect();
    SymplecticSpectrum::from_values(nus)
}

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gaussian::{CovarianceMatrix, ModePartition};
use crate::scalar::Real;

/// A bound counts as violated when `lhs < rhs − VIOLATION_TOL`.
pub const VIOLATION_TOL: f64 = 1e-10;

/// `η(d) = Σ d_α Q_α` over the quadratures `(X₁..X_N, Y₁..Y_N)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonlocalObservable {
    coeffs: Vec<f64>,
    label: String,
}

impl NonlocalObservable {
    pub fn new(coeffs: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if coeffs.is_empty() || !coeffs.len().is_multiple_of(2) {
            return invalid(format!("observable needs 2N coefficients, got {}", coeffs.len()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return invalid("observable coefficients must be finite");
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return invalid("observable coefficients are all zero");
        }
        Ok(Self {
            coeffs,
            label: label.into(),
        })
    }

    /// Built from separate X and Y coefficient lists.
    pub fn from_xy(x: &[f64], y: &[f64], label: impl Into<String>) -> Result<Self> {
        if x.len() != y.len() {
            return invalid("X and Y coefficient lists differ in length");
        }
        Self::new(x.iter().chain(y).copied().collect(), label)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_modes(&self) -> usize {
        self.coeffs.len() / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Heisenberg,
    Ppt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub label: String,
    pub kind: BoundKind,
    pub partition: Option<ModePartition>,
    /// Sum of the two variances when they are equal, `2√(product)` otherwise.
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

pub fn observable_variance<T: Real>(v: &CovarianceMatrix<T>, d: &NonlocalObservable) -> Result<f64> {
    Ok(v.quadratic_form(d.coeffs())?.to_f64())
}

fn check_pair(d: &NonlocalObservable, e: &NonlocalObservable) -> Result<usize> {
    if d.coeffs.len() != e.coeffs.len() {
        return invalid("observables act on different numbers of modes");
    }
    Ok(d.n_modes())
}

/// `dᵀ Ω e`.
fn omega_product(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len() / 2;
    (0..n).map(|j| d[j] * e[n + j] - d[n + j] * e[j]).sum()
}

/// `2|dᵀΩd′| = |⟨[η(d), η(d′)]⟩|`.
pub fn heisenberg_bound(d: &NonlocalObservable, e: &NonlocalObservable) -> Result<f64> {
    check_pair(d, e)?;
    Ok(2.0 * omega_product(&d.coeffs, &e.coeffs).abs())
}

/// `2|dᵀ Γ_A Ω Γ_A d′|`: the commutator of the mirrored observables, which
/// bounds the variances of every `A`-separable state.
pub fn ppt_bound(d: &NonlocalObservable, e: &NonlocalObservable, a: &ModePartition) -> Result<f64> {
    let n = check_pair(d, e)?;
    if a.n_modes() != n {
        return invalid(format!("partition is over {} modes, observables over {n}", a.n_modes()));
    }
    let mirror = |c: &[f64]| -> Vec<f64> {
        let mut c = c.to_vec();
        for &j in a.modes() {
            c[n + j] = -c[n + j];
        }
        c
    };
    Ok(2.0 * omega_product(&mirror(&d.coeffs), &mirror(&e.coeffs)).abs())
}

/// Left-hand side of the variance inequality.
pub fn variance_lhs(var_d: f64, var_e: f64) -> f64 {
    if (var_d - var_e).abs() <= 1e-12 * var_d.abs().max(var_e.abs()) {
        var_d + var_e
    } else {
        2.0 * (var_d * var_e).sqrt()
    }
}

pub fn evaluate_bound<T: Real>(
    v: &CovarianceMatrix<T>,
    d: &NonlocalObservable,
    e: &NonlocalObservable,
    partition: Option<&ModePartition>,
) -> Result<BoundEvaluation> {
    let lhs = variance_lhs(observable_variance(v, d)?, observable_variance(v, e)?);
    let (kind, rhs) = match partition {
        None => (BoundKind::Heisenberg, heisenberg_bound(d, e)?),
        Some(a) => (BoundKind::Ppt, ppt_bound(d, e, a)?),
    };
    Ok(BoundEvaluation {
        label: format!("{}/{}", d.label(), e.label()),
        kind,
        partition: partition.cloned(),
        lhs,
        rhs,
        violated: lhs < rhs - VIOLATION_TOL,
    })
}

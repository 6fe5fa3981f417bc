use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{symplectic_spectrum, CovarianceMatrix, ModePartition, SymplecticSpectrum};
use crate::error::{invalid, Result};
use crate::scalar::Real;

pub const DEFAULT_PPT_TOL: f64 = 1e-10;

/// Mirrors the Y quadratures of `modes`: `Γ M Γ` with `Γ = diag(..)` holding
/// `−1` at `N + j`. Any subset is accepted, including all modes.
pub fn reflect_y<T: Real>(m: &DMatrix<T>, modes: &[usize]) -> Result<DMatrix<T>> {
    let d = m.nrows();
    if d != m.ncols() || !d.is_multiple_of(2) {
        return invalid("reflect_y needs an even square matrix");
    }
    let n = d / 2;
    let mut flip = vec![false; d];
    for &j in modes {
        if j >= n {
            return invalid(format!("mode index {j} out of range for {n} modes"));
        }
        flip[n + j] = true;
    }
    let mut out = m.clone();
    for i in 0..d {
        for k in 0..d {
            if flip[i] != flip[k] {
                out[(i, k)] = -out[(i, k)];
            }
        }
    }
    Ok(out)
}

pub fn partial_transpose<T: Real>(v: &CovarianceMatrix<T>, a: &ModePartition) -> Result<DMatrix<T>> {
    if a.n_modes() != v.n_modes() {
        return invalid(format!(
            "partition is over {} modes but covariance has {}",
            a.n_modes(),
            v.n_modes()
        ));
    }
    reflect_y(v.matrix(), a.modes())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Entangled,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub partition: ModePartition,
    pub spectrum_pt: SymplecticSpectrum,
    /// Eigenvalues below `1 − tol`, ascending.
    pub sub_unity: Vec<f64>,
    pub log_negativity: f64,
    pub verdict: Verdict,
}

impl EntanglementReport {
    pub fn entangled(&self) -> bool {
        self.verdict == Verdict::Entangled
    }

    /// Product of the sub-unity eigenvalues (1 when there are none).
    pub fn nu_product(&self) -> f64 {
        self.sub_unity.iter().product()
    }
}

pub fn ppt_report<T: Real>(v: &CovarianceMatrix<T>, a: &ModePartition, tol: f64) -> Result<EntanglementReport> {
    if !(0.0..1.0).contains(&tol) {
        return invalid(format!("tolerance must lie in [0, 1), got {tol}"));
    }
    let pt = partial_transpose(v, a)?;
    let spectrum_pt = symplectic_spectrum(&pt)?;
    let sub_unity = spectrum_pt.sub_unity(tol);
    let log_negativity = -sub_unity.iter().map(|x| x.log2()).sum::<f64>();
    let verdict = if sub_unity.is_empty() {
        Verdict::Undecided
    } else {
        Verdict::Entangled
    };
    Ok(EntanglementReport {
        partition: a.clone(),
        spectrum_pt,
        sub_unity,
        log_negativity: log_negativity.max(0.0),
        verdict,
    })
}

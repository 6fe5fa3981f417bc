//! Direct construction of the same states by exponentiating the linear
//! Heisenberg flow of the quadratic momentum. Independent of the
//! Bloch-Messiah factory and used to cross-check it.

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::factory::{Coupling, StateSpec};
use crate::gaussian::{omega_times, CovarianceMatrix};
use crate::linalg::max_asymmetry;
use crate::DoubleDouble;

/// Exponents with ‖Mz‖₁ above this are rejected as unphysically large gain.
pub const MAX_GAIN_NORM: f64 = 50.0;
pub const HAMILTONIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingTerm {
    pub j: usize,
    pub k: usize,
    pub g: Coupling,
}

/// `G = ½ Σ K_jk a_j†a_k† − h.c.` with `K` symmetric. A term `(j, k, g)`
/// adds `g` to both `K_jk` and `K_kj`: for `j ≠ k` that is `g a_j†a_k†`, for
/// `j = k` the single-mode squeezer `(g/2) a_j†²`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticMomentum {
    n_modes: usize,
    terms: Vec<CouplingTerm>,
}

impl QuadraticMomentum {
    pub fn new(n_modes: usize, terms: impl IntoIterator<Item = (usize, usize, Coupling)>) -> Result<Self> {
        if n_modes == 0 {
            return invalid("momentum needs at least one mode");
        }
        let terms: Vec<CouplingTerm> = terms.into_iter().map(|(j, k, g)| CouplingTerm { j, k, g }).collect();
        if terms.is_empty() {
            return invalid("momentum needs at least one coupling term");
        }
        for t in &terms {
            if t.j >= n_modes || t.k >= n_modes {
                return invalid(format!("coupling ({}, {}) out of range for {n_modes} modes", t.j, t.k));
            }
            if !(t.g.re.is_finite() && t.g.im.is_finite()) {
                return invalid("coupling constants must be finite");
            }
        }
        Ok(Self { n_modes, terms })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[CouplingTerm] {
        &self.terms
    }

    /// Real and imaginary parts of the symmetric coupling matrix `K`.
    pub fn coupling_matrix(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.n_modes;
        let mut kr = DMatrix::zeros(n, n);
        let mut ki = DMatrix::zeros(n, n);
        for t in &self.terms {
            kr[(t.j, t.k)] += t.g.re;
            ki[(t.j, t.k)] += t.g.im;
            if t.j != t.k {
                kr[(t.k, t.j)] += t.g.re;
                ki[(t.k, t.j)] += t.g.im;
            }
        }
        (kr, ki)
    }
}

/// `d⟨Q⟩/dz = M⟨Q⟩`, `dV/dz = MV + VMᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftMatrix {
    matrix: DMatrix<f64>,
}

impl DriftMatrix {
    /// Accepts any Ω-Hamiltonian matrix (ΩM symmetric).
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return invalid(format!("drift must be an even square matrix, got {r}×{c}"));
        }
        let asym = max_asymmetry(&omega_times(&matrix));
        if !(asym <= HAMILTONIAN_TOL) {
            return invalid(format!("drift is not Ω-Hamiltonian (ΩM asymmetry {asym:e})"));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }
}

/// From `da/dz = K a†`: `dX/dz = Kr X + Ki Y`, `dY/dz = Ki X − Kr Y`.
pub fn drift_matrix(p: &QuadraticMomentum) -> Result<DriftMatrix> {
    let n = p.n_modes();
    let (kr, ki) = p.coupling_matrix();
    let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => kr[(i, j)],
        (true, false) => ki[(i, j - n)],
        (false, true) => ki[(i - n, j)],
        (false, false) => -kr[(i - n, j - n)],
    });
    DriftMatrix::from_matrix(m)
}

/// The symplectic map `e^{Mz}`.
pub fn propagator(m: &DriftMatrix, z: f64) -> Result<DMatrix<f64>> {
    if !(z.is_finite() && z >= 0.0) {
        return invalid(format!("propagation length must be finite and ≥ 0, got {z}"));
    }
    let scaled = m.matrix() * z;
    let norm = (0..scaled.ncols())
        .map(|j| scaled.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if norm > MAX_GAIN_NORM {
        return Err(Error::GainOverflow { norm });
    }
    Ok(scaled.exp())
}

pub fn evolve(m: &DriftMatrix, v0: &CovarianceMatrix, z: f64) -> Result<CovarianceMatrix> {
    if v0.n_modes() != m.n_modes() {
        return invalid("drift and covariance mode counts differ");
    }
    let s = propagator(m, z)?;
    Ok(CovarianceMatrix::from_trusted(&s * v0.matrix() * s.transpose()))
}

pub fn evolve_vacuum(m: &DriftMatrix, z: f64) -> Result<CovarianceMatrix> {
    let s = propagator(m, z)?;
    Ok(CovarianceMatrix::from_trusted(&s * s.transpose()))
}

/// Symplectic matrix of the local rotations `a_j → e^{−iφ_j} a_j`.
pub fn phase_rotation(phases: &[f64]) -> DMatrix<f64> {
    let n = phases.len();
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    for (j, &phi) in phases.iter().enumerate() {
        let (s, c) = phi.sin_cos();
        r[(j, j)] = c;
        r[(j, n + j)] = s;
        r[(n + j, j)] = -s;
        r[(n + j, n + j)] = c;
    }
    r
}

/// The momentum of a family, in factory storage order.
pub fn family_momentum(spec: &StateSpec) -> QuadraticMomentum {
    let (g1, g2) = spec.couplings();
    let terms = match spec {
        StateSpec::Tri(_) => vec![(0, 1, g1), (0, 2, g2)],
        StateSpec::Lin4(_) => vec![(0, 1, g1), (1, 2, g2), (0, 3, g2)],
        StateSpec::Sq4(_) => vec![(0, 1, g1), (1, 2, g1 + g2), (2, 3, g2), (0, 3, g1 + g2)],
    };
    QuadraticMomentum::new(spec.n_modes(), terms).expect("family momenta are well formed")
}

/// Local phases that make every coupling of the family real and nonnegative.
pub fn family_phases(spec: &StateSpec) -> Vec<f64> {
    let (g1, g2) = spec.couplings();
    match spec {
        StateSpec::Tri(_) => vec![0.0, g1.arg(), g2.arg()],
        StateSpec::Lin4(_) => {
            let (h1, h2) = (0.5 * g1.arg(), g2.arg() - 0.5 * g1.arg());
            vec![h1, h1, h2, h2]
        }
        StateSpec::Sq4(p) => {
            let h = 0.5 * p.phi_minus();
            vec![h, h, -h, -h]
        }
    }
}

/// Oracle covariance: vacuum evolved under the family momentum, then
/// phase-rotated into the factory's frame.
pub fn oracle_covariance(spec: &StateSpec) -> Result<CovarianceMatrix> {
    let m = drift_matrix(&family_momentum(spec))?;
    let v = evolve_vacuum(&m, spec.z())?;
    let r = phase_rotation(&family_phases(spec));
    Ok(CovarianceMatrix::from_trusted(&r * v.matrix() * r.transpose()))
}

/// Largest elementwise distance between the oracle and a given covariance.
pub fn crosscheck_covariance(spec: &StateSpec, v: &CovarianceMatrix) -> Result<f64> {
    let oracle = oracle_covariance(spec)?;
    if oracle.n_modes() != v.n_modes() {
        return invalid("mode counts differ");
    }
    Ok((oracle.matrix() - v.matrix()).abs().max())
}

/// Oracle vs. factory (factory evaluated in double-double, then rounded).
pub fn crosscheck(spec: &StateSpec) -> Result<f64> {
    let factory = spec.build::<DoubleDouble>()?.covariance.to_f64();
    crosscheck_covariance(spec, &factory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::TripartiteParams;
    use crate::gaussian::symplectic_form;

    fn c(re: f64) -> Coupling {
        Coupling::new(re, 0.0)
    }

    #[test]
    fn single_mode_squeezer() {
        let m = drift_matrix(&QuadraticMomentum::new(1, [(0, 0, c(0.5))]).unwrap()).unwrap();
        let v = evolve_vacuum(&m, 2.0).unwrap();
        assert!((v.get(0, 0) - 2f64.exp()).abs() < 1e-13);
        assert!((v.get(1, 1) - (-2f64).exp()).abs() < 1e-15);
        assert!(v.get(0, 1).abs() < 1e-15);
    }

    #[test]
    fn two_mode_flow_direction() {
        let m = drift_matrix(&QuadraticMomentum::new(2, [(0, 1, c(1.0))]).unwrap()).unwrap();
        let mm = m.matrix();
        assert_eq!(mm[(0, 1)], 1.0);
        assert_eq!(mm[(2, 3)], -1.0);
        let v = evolve_vacuum(&m, 1.0).unwrap();
        assert!((v.get(0, 0) - 2f64.cosh()).abs() < 1e-13);
        assert!((v.get(0, 0) - 3.7622).abs() < 1e-4);
    }

    #[test]
    fn zero_length_is_vacuum() {
        let spec = StateSpec::Tri(TripartiteParams::from_ratio(1.0, 0.0).unwrap());
        let v = oracle_covariance(&spec).unwrap();
        assert!((v.matrix() - DMatrix::<f64>::identity(6, 6)).abs().max() < 1e-15);
    }

    #[test]
    fn propagator_is_symplectic() {
        let spec = StateSpec::Tri(TripartiteParams::new(Coupling::new(0.3, 0.4), c(0.9), 1.0).unwrap());
        let m = drift_matrix(&family_momentum(&spec)).unwrap();
        let s = propagator(&m, 1.3).unwrap();
        let w = symplectic_form(3).unwrap().into_matrix();
        assert!((s.transpose() * &w * &s - &w).abs().max() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(QuadraticMomentum::new(2, [(0, 2, c(1.0))]).is_err());
        assert!(QuadraticMomentum::new(2, Vec::new()).is_err());
        let m = drift_matrix(&QuadraticMomentum::new(1, [(0, 0, c(1.0))]).unwrap()).unwrap();
        assert!(matches!(propagator(&m, 100.0), Err(Error::GainOverflow { .. })));
        assert!(propagator(&m, -1.0).is_err());
        assert!(DriftMatrix::from_matrix(DMatrix::<f64>::identity(2, 2)).is_err());
    }

    #[test]
    fn tripartite_crosscheck() {
        let spec = StateSpec::Tri(TripartiteParams::from_theta(std::f64::consts::FRAC_PI_4, 1.0).unwrap());
        assert!(crosscheck(&spec).unwrap() < 1e-9);
    }
}

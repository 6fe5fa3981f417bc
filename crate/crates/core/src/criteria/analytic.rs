//! Closed-form symplectic spectra of the partially transposed family states.
//!
//! Everything is evaluated in forms free of catastrophic cancellation: pairs
//! `ν± = b ± √(b²−1)` are computed as `ν₊` directly and `ν₋ = 1/ν₊`.

use std::f64::consts::LN_2;

use crate::error::{invalid, Result};
use crate::factory::{FourModeLinearParams, FourModeSquareParams, StateSpec, TripartiteParams};
use crate::gaussian::{ModePartition, SymplecticSpectrum};

/// `μ + √(μ²−1)` from `μ − 1 ≥ 0`.
fn upper_from_excess(excess: f64) -> f64 {
    let mu = 1.0 + excess;
    mu + (excess * (mu + 1.0)).sqrt()
}

fn spectrum(values: Vec<f64>) -> Result<SymplecticSpectrum> {
    SymplecticSpectrum::from_values(values)
}

fn tripartite(p: &TripartiteParams, a: &ModePartition) -> Result<SymplecticSpectrum> {
    let gz = p.gbar_z();
    let theta = p.theta();
    let single = |weight: f64| {
        // b = 1 + 2q², ν₊ = b + √(b²−1) = 1 + 2q² + 2|q|√(1+q²)
        let q = weight * gz.sinh();
        let up = 1.0 + 2.0 * q * q + 2.0 * q.abs() * (1.0 + q * q).sqrt();
        spectrum(vec![1.0 / up, 1.0, up])
    };
    match a.modes() {
        [0] => spectrum(vec![(-2.0 * gz).exp(), 1.0, (2.0 * gz).exp()]),
        [1] => single(theta.cos()),
        [2] => single(theta.sin()),
        _ => invalid(format!("no closed form for partition {a} of the tripartite state")),
    }
}

fn linear(p: &FourModeLinearParams, a: &ModePartition) -> Result<SymplecticSpectrum> {
    let (rs, rd) = p.squeezes();
    let (c, s) = p.gamma_cs::<f64>();
    let single = |cw: f64, sw: f64| {
        let excess = 2.0 * cw * cw * rs.sinh().powi(2) + 2.0 * sw * sw * rd.sinh().powi(2);
        let up = upper_from_excess(excess);
        spectrum(vec![1.0 / up, 1.0, 1.0, up])
    };
    match a.modes() {
        [0] | [1] => single(c, s),
        [2] | [3] => single(s, c),
        [0, 1] => {
            let x = 2.0 * c * s * (rs + rd).sinh();
            let up = (1.0 + x * x).sqrt() + x.abs();
            spectrum(vec![1.0 / up, 1.0 / up, up, up])
        }
        [0, 2] => spectrum(vec![
            (-2.0 * rs).exp(),
            (-2.0 * rd).exp(),
            (2.0 * rd).exp(),
            (2.0 * rs).exp(),
        ]),
        [0, 3] => {
            let shift = rs - rd;
            let w = (c * c - s * s) * (rs + rd).sinh();
            let up = (1.0 + w * w).sqrt() + w.abs();
            spectrum(vec![
                (-shift).exp() / up,
                (-shift).exp() * up,
                shift.exp() / up,
                shift.exp() * up,
            ])
        }
        _ => invalid(format!("no closed form for partition {a} of the linear four-mode state")),
    }
}

fn square(p: &FourModeSquareParams, a: &ModePartition) -> Result<SymplecticSpectrum> {
    let (rs, rd) = p.squeezes();
    match a.modes() {
        [_] => {
            let up = upper_from_excess(rs.sinh().powi(2) + rd.sinh().powi(2));
            spectrum(vec![1.0 / up, 1.0, 1.0, up])
        }
        [0, 1] => {
            let r = (rs + rd).abs();
            spectrum(vec![(-r).exp(), (-r).exp(), r.exp(), r.exp()])
        }
        [0, 2] => spectrum(vec![
            (-2.0 * rs).exp(),
            (-2.0 * rd.abs()).exp(),
            (2.0 * rd.abs()).exp(),
            (2.0 * rs).exp(),
        ]),
        [0, 3] => {
            let r = rs - rd;
            spectrum(vec![(-r).exp(), (-r).exp(), r.exp(), r.exp()])
        }
        _ => invalid(format!("no closed form for partition {a} of the square four-mode state")),
    }
}

/// Closed-form symplectic spectrum of the partial transpose over `a`.
pub fn analytic_pt_spectrum(spec: &StateSpec, a: &ModePartition) -> Result<SymplecticSpectrum> {
    if a.n_modes() != spec.n_modes() {
        return invalid(format!(
            "partition is over {} modes but the {} state has {}",
            a.n_modes(),
            spec.family(),
            spec.n_modes()
        ));
    }
    match spec {
        StateSpec::Tri(p) => tripartite(p, a),
        StateSpec::Lin4(p) => linear(p, a),
        StateSpec::Sq4(p) => square(p, a),
    }
}

/// Logarithmic negativity across `{1,3}×{2,4}` of the linear state:
/// `(2/ln 2)·√(4|g₂|² + |g₁|²)·z`.
pub fn negativity_p13(p: &FourModeLinearParams) -> f64 {
    let (a1, a2) = (p.g1().norm(), p.g2().norm());
    2.0 / LN_2 * (4.0 * a2 * a2 + a1 * a1).sqrt() * p.z()
}

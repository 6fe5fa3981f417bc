//! Variance-bound suites built on the Bloch-Messiah observables of the
//! tripartite and linear four-mode states. The square state has no variance
//! suite; only its PPT spectra are analysed.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::bounds::{evaluate_bound, BoundEvaluation, NonlocalObservable};
use crate::error::Result;
use crate::factory::{four_mode_linear_state, tripartite_state, FourModeLinearParams, TripartiteParams};
use crate::gaussian::{CovarianceMatrix, ModePartition};
use crate::scalar::Real;
use crate::DoubleDouble;

/// The commuting pair `η(d) = (X₀ − cX₁ − sX₂)/√2`, `η(d′) = (Y₀ + cY₁ + sY₂)/√2`
/// with `c = cos θ`, `s = sin θ`; both have variance `e^{−2ḡz}`.
pub fn tripartite_observables(p: &TripartiteParams) -> (NonlocalObservable, NonlocalObservable) {
    let (s, c) = p.theta().sin_cos();
    let h = FRAC_1_SQRT_2;
    let d = NonlocalObservable::from_xy(&[h, -h * c, -h * s], &[0.0; 3], "d").expect("nonzero");
    let e = NonlocalObservable::from_xy(&[0.0; 3], &[h, h * c, h * s], "d'").expect("nonzero");
    (d, e)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripartiteBoundSuite {
    /// One PPT bound per single-mode partition `{0}`, `{1}`, `{2}`.
    pub partitions: Vec<BoundEvaluation>,
    pub heisenberg: BoundEvaluation,
    /// Onset `ḡz > ½ ln(1 + x²)` for mode 1.
    pub threshold_mode1: f64,
    /// Onset `ḡz > ½ ln(1 + 1/x²)` for mode 2.
    pub threshold_mode2: f64,
}

/// `½ ln(1+x²) = −ln cos θ` and `½ ln(1+1/x²) = −ln sin θ`.
pub fn tripartite_thresholds(p: &TripartiteParams) -> (f64, f64) {
    let (s, c) = p.theta().sin_cos();
    (-c.ln(), -s.ln())
}

pub fn tripartite_bound_suite_on<T: Real>(p: &TripartiteParams, v: &CovarianceMatrix<T>) -> Result<TripartiteBoundSuite> {
    let (d, e) = tripartite_observables(p);
    let partitions = (0..3)
        .map(|j| evaluate_bound(v, &d, &e, Some(&ModePartition::new(3, [j])?)))
        .collect::<Result<Vec<_>>>()?;
    let (threshold_mode1, threshold_mode2) = tripartite_thresholds(p);
    Ok(TripartiteBoundSuite {
        partitions,
        heisenberg: evaluate_bound(v, &d, &e, None)?,
        threshold_mode1,
        threshold_mode2,
    })
}

/// Evaluates the suite on the factory state (built in double-double).
pub fn tripartite_bound_suite(p: &TripartiteParams) -> Result<TripartiteBoundSuite> {
    let v = tripartite_state::<DoubleDouble>(p)?.covariance;
    tripartite_bound_suite_on(p, &v)
}

/// The four observables `σ, σ′, δ, δ′` of the linear state: `σ`, `σ′` have
/// variance `e^{−2r_S}`, `δ`, `δ′` have `e^{−2r_D}`.
pub fn four_mode_observables(p: &FourModeLinearParams) -> [NonlocalObservable; 4] {
    let (c, s) = p.gamma_cs::<f64>();
    let h = FRAC_1_SQRT_2;
    let z = [0.0; 4];
    let mk = |x: [f64; 4], y: [f64; 4], label: &str| {
        NonlocalObservable::from_xy(&x.map(|v| v * h), &y.map(|v| v * h), label).expect("nonzero")
    };
    [
        mk([c, -c, s, -s], z, "sigma"),
        mk(z, [c, c, s, s], "sigma'"),
        mk([-s, -s, c, c], z, "delta"),
        mk(z, [-s, s, c, -c], "delta'"),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundPair {
    SigmaSigma,
    SigmaDelta,
    DeltaSigma,
    DeltaDelta,
}

impl BoundPair {
    pub const ALL: [BoundPair; 4] = [
        BoundPair::SigmaSigma,
        BoundPair::SigmaDelta,
        BoundPair::DeltaSigma,
        BoundPair::DeltaDelta,
    ];

    fn indices(self) -> (usize, usize) {
        match self {
            BoundPair::SigmaSigma => (0, 1),
            BoundPair::SigmaDelta => (0, 3),
            BoundPair::DeltaSigma => (2, 1),
            BoundPair::DeltaDelta => (2, 3),
        }
    }

    /// The pair giving the strongest test on each partition of the linear state.
    pub fn highlighted(a: &ModePartition) -> BoundPair {
        match a.modes() {
            [0] | [1] => BoundPair::SigmaSigma,
            [2] | [3] => BoundPair::DeltaDelta,
            [0, 1] => BoundPair::SigmaDelta,
            _ => BoundPair::SigmaSigma,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionBounds {
    pub partition: ModePartition,
    /// In [`BoundPair::ALL`] order.
    pub bounds: Vec<BoundEvaluation>,
    pub highlighted: BoundPair,
    /// The closed-form verdict in terms of `r_S`, `r_D`.
    pub closed_form_violated: bool,
}

impl PartitionBounds {
    pub fn best(&self) -> &BoundEvaluation {
        let k = BoundPair::ALL.iter().position(|&b| b == self.highlighted).unwrap();
        &self.bounds[k]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourModeBoundSuite {
    pub partitions: Vec<PartitionBounds>,
}

/// Sufficient inseparability conditions with `cos²γ = r_S/(r_S + r_D)`:
/// `{1},{2}: e^{−2r_S} < cos²γ`, `{3},{4}: e^{−2r_D} < cos²γ`,
/// `{1,2}: e^{−(r_S+r_D)} < 2√(r_S r_D)/(r_S+r_D)`, `{1,3}: e^{−2r_S} < 1`,
/// `{1,4}: e^{−2r_S} < (r_S − r_D)/(r_S + r_D)`.
pub fn closed_form_verdict(p: &FourModeLinearParams, a: &ModePartition) -> bool {
    let (rs, rd) = p.squeezes();
    let sum = rs + rd;
    if !(sum > 0.0) {
        return false;
    }
    match a.modes() {
        [0] | [1] => (-2.0 * rs).exp() < rs / sum,
        [2] | [3] => (-2.0 * rd).exp() < rs / sum,
        [0, 1] => (-sum).exp() < 2.0 * (rs * rd).sqrt() / sum,
        [0, 2] => (-2.0 * rs).exp() < 1.0,
        [0, 3] => (-2.0 * rs).exp() < (rs - rd) / sum,
        _ => false,
    }
}

pub fn four_mode_bound_suite_on<T: Real>(p: &FourModeLinearParams, v: &CovarianceMatrix<T>) -> Result<FourModeBoundSuite> {
    let obs = four_mode_observables(p);
    let partitions = crate::Family::Lin4
        .partitions()
        .into_iter()
        .map(|a| {
            let bounds = BoundPair::ALL
                .iter()
                .map(|pair| {
                    let (i, j) = pair.indices();
                    evaluate_bound(v, &obs[i], &obs[j], Some(&a))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PartitionBounds {
                highlighted: BoundPair::highlighted(&a),
                closed_form_violated: closed_form_verdict(p, &a),
                partition: a,
                bounds,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FourModeBoundSuite { partitions })
}

/// Evaluates the suite on the factory state (built in double-double).
pub fn four_mode_bound_suite(p: &FourModeLinearParams) -> Result<FourModeBoundSuite> {
    let v = four_mode_linear_state::<DoubleDouble>(p)?.covariance;
    four_mode_bound_suite_on(p, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{heisenberg_bound, observable_variance, ppt_bound};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn tripartite_observables_commute_and_are_squeezed() {
        let p = TripartiteParams::from_ratio(0.7, 1.2).unwrap();
        let (d, e) = tripartite_observables(&p);
        assert!(heisenberg_bound(&d, &e).unwrap() < 1e-15);
        let v = tripartite_state::<DoubleDouble>(&p).unwrap().covariance;
        for o in [&d, &e] {
            assert!((observable_variance(&v, o).unwrap() - (-2.4f64).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn tripartite_ppt_bounds() {
        let p = TripartiteParams::from_theta(0.4, 1.0).unwrap();
        let (d, e) = tripartite_observables(&p);
        let b = |j| ppt_bound(&d, &e, &ModePartition::new(3, [j]).unwrap()).unwrap();
        assert!((b(0) - 2.0).abs() < 1e-15);
        assert!((b(1) - 2.0 * 0.4f64.cos().powi(2)).abs() < 1e-15);
        assert!((b(2) - 2.0 * 0.4f64.sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn tripartite_below_threshold() {
        let p = TripartiteParams::from_theta(FRAC_PI_4, 0.3).unwrap();
        let suite = tripartite_bound_suite(&p).unwrap();
        assert!(suite.partitions[0].violated);
        assert!(!suite.partitions[1].violated && !suite.partitions[2].violated);
        assert!(!suite.heisenberg.violated);
        let ln_sqrt2 = 0.5 * 2f64.ln();
        assert!((suite.threshold_mode1 - ln_sqrt2).abs() < 1e-15);
        assert!((suite.threshold_mode2 - ln_sqrt2).abs() < 1e-15);
    }

    #[test]
    fn four_mode_variances() {
        let p = FourModeLinearParams::from_ratio(1.7, 0.9).unwrap();
        let (rs, rd) = p.squeezes();
        let v = four_mode_linear_state::<DoubleDouble>(&p).unwrap().covariance;
        let obs = four_mode_observables(&p);
        let expect = [(-2.0 * rs).exp(), (-2.0 * rs).exp(), (-2.0 * rd).exp(), (-2.0 * rd).exp()];
        for (o, e) in obs.iter().zip(expect) {
            assert!((observable_variance(&v, o).unwrap() - e).abs() < 1e-14, "{}", o.label());
        }
    }

    #[test]
    fn table_iv_entries() {
        let p = FourModeLinearParams::from_ratio(0.6, 1.0).unwrap();
        let (c, s) = p.gamma_cs::<f64>();
        let obs = four_mode_observables(&p);
        let p13 = ModePartition::new(4, [0, 2]).unwrap();
        assert!((ppt_bound(&obs[0], &obs[1], &p13).unwrap() - 2.0).abs() < 1e-15);
        let p12 = ModePartition::new(4, [0, 1]).unwrap();
        assert!(ppt_bound(&obs[0], &obs[1], &p12).unwrap() < 1e-15);
        assert!(ppt_bound(&obs[2], &obs[3], &p12).unwrap() < 1e-15);
        assert!((ppt_bound(&obs[0], &obs[3], &p12).unwrap() - 4.0 * c * s).abs() < 1e-15);
    }

    #[test]
    fn numeric_bounds_agree_with_closed_form() {
        for &x in &[0.2, 1.0, 3.0] {
            for &gz in &[0.05, 0.3, 1.0, 2.5] {
                let p = FourModeLinearParams::from_ratio(x, gz).unwrap();
                for pb in four_mode_bound_suite(&p).unwrap().partitions {
                    assert_eq!(pb.best().violated, pb.closed_form_violated, "x={x} gz={gz} {}", pb.partition);
                }
            }
        }
    }

    #[test]
    fn zero_gain_never_violates() {
        let p = FourModeLinearParams::from_ratio(1.0, 0.0).unwrap();
        for pb in four_mode_bound_suite(&p).unwrap().partitions {
            assert!(!pb.closed_form_violated);
            assert!(pb.bounds.iter().all(|b| !b.violated));
        }
    }
}

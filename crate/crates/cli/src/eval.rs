//! Pointwise evaluation shared by `report`, `sweep` and `verify`.

use serde::{Deserialize, Serialize};

use cvgauss::criteria::{four_mode_bound_suite_on, tripartite_bound_suite_on, BoundEvaluation};
use cvgauss::factory::{covariance_from_bm, StateSpec};
use cvgauss::gaussian::{ppt_report, CovarianceMatrix, ModePartition, DEFAULT_PPT_TOL};
use cvgauss::{DoubleDouble, Real};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F64,
    #[default]
    Dd,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluator {
    pub precision: Precision,
    pub ppt_tol: f64,
    /// Test hook: flips the sign of the first squeeze parameter.
    pub inject_fault: bool,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self {
            precision: Precision::Dd,
            ppt_tol: DEFAULT_PPT_TOL,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

impl From<&BoundEvaluation> for BoundSummary {
    fn from(b: &BoundEvaluation) -> Self {
        Self {
            label: b.label.clone(),
            lhs: b.lhs,
            rhs: b.rhs,
            violated: b.violated,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionResult {
    pub partition: ModePartition,
    /// Ascending.
    pub spectrum_pt: Vec<f64>,
    pub sub_unity: Vec<f64>,
    pub nu_product: f64,
    pub log_negativity: f64,
    pub entangled: bool,
    /// `None` for the square state, which has no variance suite.
    pub bound: Option<BoundSummary>,
}

type BoundLookup = Box<dyn Fn(&ModePartition) -> Option<BoundSummary>>;

impl Evaluator {
    pub fn covariance<T: Real>(&self, spec: &StateSpec) -> CliResult<CovarianceMatrix<T>> {
        let mut bm = spec.bloch_messiah::<T>();
        if self.inject_fault {
            bm.flip_squeeze(0);
        }
        Ok(covariance_from_bm(&bm)?)
    }

    /// The factory covariance rounded to f64, after a physicality check in
    /// the working precision.
    pub fn state(&self, spec: &StateSpec) -> CliResult<CovarianceMatrix> {
        match self.precision {
            Precision::F64 => self.checked::<f64>(spec),
            Precision::Dd => self.checked::<DoubleDouble>(spec),
        }
    }

    fn checked<T: Real>(&self, spec: &StateSpec) -> CliResult<CovarianceMatrix> {
        let v = self.covariance::<T>(spec)?;
        let report = v.validate()?;
        if !report.physical {
            return Err(CliError::Unphysical(format!(
                "min eigenvalue of V + iΩ is {:e}",
                report.min_eig_of_v_plus_i_omega
            )));
        }
        Ok(v.to_f64())
    }

    pub fn evaluate(&self, spec: &StateSpec, partitions: &[ModePartition]) -> CliResult<Vec<PartitionResult>> {
        match self.precision {
            Precision::F64 => self.evaluate_in::<f64>(spec, partitions),
            Precision::Dd => self.evaluate_in::<DoubleDouble>(spec, partitions),
        }
    }

    fn evaluate_in<T: Real>(&self, spec: &StateSpec, partitions: &[ModePartition]) -> CliResult<Vec<PartitionResult>> {
        let v = self.covariance::<T>(spec)?;
        let bound_for: BoundLookup = match spec {
            StateSpec::Tri(p) => {
                let suite = tripartite_bound_suite_on(p, &v)?;
                Box::new(move |a| {
                    suite
                        .partitions
                        .iter()
                        .find(|b| b.partition.as_ref() == Some(a))
                        .map(BoundSummary::from)
                })
            }
            StateSpec::Lin4(p) => {
                let suite = four_mode_bound_suite_on(p, &v)?;
                Box::new(move |a| {
                    suite
                        .partitions
                        .iter()
                        .find(|pb| &pb.partition == a)
                        .map(|pb| BoundSummary::from(pb.best()))
                })
            }
            StateSpec::Sq4(_) => Box::new(|_| None),
        };
        partitions
            .iter()
            .map(|a| {
                let r = ppt_report(&v, a, self.ppt_tol)?;
                Ok(PartitionResult {
                    partition: a.clone(),
                    spectrum_pt: r.spectrum_pt.ascending(),
                    nu_product: r.nu_product(),
                    log_negativity: r.log_negativity,
                    entangled: r.entangled(),
                    sub_unity: r.sub_unity,
                    bound: bound_for(a),
                })
            })
            .collect()
    }
}

//! Self-checks over a parameter grid: oracle vs. factory, closed-form vs.
//! numeric spectra, purity, and variance bounds implying PPT.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cvgauss::criteria::analytic_pt_spectrum;
use cvgauss::factory::StateSpec;
use cvgauss::gaussian::symplectic_spectrum;
use cvgauss::oracle::oracle_covariance;
use cvgauss::{DoubleDouble, Family, Real};

use crate::error::{CliError, CliResult};
use crate::eval::{Evaluator, Precision};
use crate::sweep::{state_at, Axis};

pub const CROSSCHECK_TOL: f64 = 1e-8;
pub const SPECTRUM_TOL: f64 = 1e-9;
pub const PURITY_TOL: f64 = 1e-9;
const MAX_LISTED: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Coarse,
    Fine,
}

impl Grid {
    pub fn resolution(self) -> usize {
        match self {
            Grid::Coarse => 21,
            Grid::Fine => 101,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub failures: usize,
    /// The first few failing points.
    pub offenders: Vec<String>,
}

impl CheckResult {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            max_deviation: 0.0,
            failures: 0,
            offenders: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, dev: f64, failed: bool, what: impl FnOnce() -> String) {
        // NaN counts as a failure
        self.max_deviation = if dev.is_nan() { f64::NAN } else { self.max_deviation.max(dev) };
        if failed || dev.is_nan() {
            self.failures += 1;
            if self.offenders.len() < MAX_LISTED {
                self.offenders.push(what());
            }
        }
    }

    fn check(&mut self, dev: f64, what: impl FnOnce() -> String) {
        let tol = self.tolerance;
        self.record(dev, !(dev <= tol), what);
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<16} max deviation {:.3e} (tol {:.0e}), {} failing point(s)",
            self.name, self.max_deviation, self.tolerance, self.failures
        )?;
        for o in &self.offenders {
            write!(f, "\n    {o}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub points: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect()
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} grid points", self.points)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Relative to `max(1, |reference|)`.
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[derive(Default)]
struct PointChecks {
    crosscheck: f64,
    spectra: Vec<(String, f64)>,
    purity: f64,
    /// Partitions where a variance bound is violated without PPT entanglement.
    bound_not_ppt: Vec<String>,
}

fn purity_deviation<T: Real>(eval: &Evaluator, spec: &StateSpec) -> CliResult<f64> {
    let v = eval.covariance::<T>(spec)?;
    let nu = symplectic_spectrum(v.matrix())?;
    Ok(nu.values().iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max))
}

fn check_point(eval: &Evaluator, spec: &StateSpec) -> CliResult<PointChecks> {
    let family = spec.family();
    let v = eval.state(spec)?;
    let oracle = oracle_covariance(spec)?;
    let scale = oracle.matrix().abs().max().max(1.0);
    let crosscheck = (oracle.matrix() - v.matrix()).abs().max() / scale;

    let results = eval.evaluate(spec, &family.partitions())?;
    let mut out = PointChecks {
        crosscheck,
        purity: match eval.precision {
            Precision::F64 => purity_deviation::<f64>(eval, spec)?,
            Precision::Dd => purity_deviation::<DoubleDouble>(eval, spec)?,
        },
        ..Default::default()
    };
    for r in &results {
        let label = family.partition_label(&r.partition);
        let analytic = analytic_pt_spectrum(spec, &r.partition)?.ascending();
        let dev = r
            .spectrum_pt
            .iter()
            .zip(&analytic)
            .map(|(a, b)| rel(*a, *b))
            .fold(0.0, f64::max);
        out.spectra.push((label.clone(), dev));
        if r.bound.as_ref().is_some_and(|b| b.violated) && !r.entangled {
            out.bound_not_ppt.push(label);
        }
    }
    Ok(out)
}

pub fn verify(grid: Grid, spectrum_tol: f64, eval: &Evaluator) -> CliResult<VerifySummary> {
    if !(spectrum_tol > 0.0 && spectrum_tol.is_finite()) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {spectrum_tol}")));
    }
    let n = grid.resolution();
    let mut points = Vec::new();
    for family in Family::ALL {
        let xs = Axis::default_x(family).points(n);
        let ys = Axis::default_y().points(n);
        for &y in &ys {
            for &x in &xs {
                points.push((family, x, y));
            }
        }
    }
    let evaluated = points
        .par_iter()
        .map(|&(family, x, y)| check_point(eval, &state_at(family, x, y)?))
        .collect::<CliResult<Vec<_>>>()?;

    let mut cross = CheckResult::new("oracle-vs-factory", CROSSCHECK_TOL);
    let mut spectra = CheckResult::new("analytic-spectra", spectrum_tol);
    let mut purity = CheckResult::new("purity", PURITY_TOL);
    let mut subset = CheckResult::new("bound-implies-ppt", 0.0);
    for (&(family, x, y), pc) in points.iter().zip(&evaluated) {
        let at = || format!("{family} x={x:.6e} y={y:.6e}");
        cross.check(pc.crosscheck, || format!("{} deviation {:.3e}", at(), pc.crosscheck));
        for (label, dev) in &pc.spectra {
            spectra.check(*dev, || format!("{} partition {label} deviation {dev:.3e}", at()));
        }
        purity.check(pc.purity, || format!("{} deviation {:.3e}", at(), pc.purity));
        let bad = pc.bound_not_ppt.len() as f64;
        subset.record(bad, bad > 0.0, || format!("{} partitions {}", at(), pc.bound_not_ppt.join(" ")));
    }
    Ok(VerifySummary {
        points: points.len(),
        checks: vec![cross, spectra, purity, subset],
    })
}

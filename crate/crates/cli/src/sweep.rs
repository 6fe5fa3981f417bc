//! Two-dimensional parameter sweeps written as CSV.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cvgauss::factory::{FourModeLinearParams, FourModeSquareParams, StateSpec, TripartiteParams};
use cvgauss::gaussian::ModePartition;
use cvgauss::Family;

use crate::error::{CliError, CliResult};
use crate::eval::{Evaluator, PartitionResult};

pub const CSV_HEADER: &str = "family,x,y,partition,nu_product,log_negativity,bound_violated";
pub const DEFAULT_RESOLUTION: usize = 101;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    #[serde(default = "Axis::default_scale")]
    pub scale: Scale,
}

impl Axis {
    fn default_scale() -> Scale {
        Scale::Linear
    }

    /// Ratio `|g₂/g₁|` on a log grid for tri/lin4, `φ₋` for sq4.
    pub fn default_x(family: Family) -> Axis {
        match family {
            Family::Tri | Family::Lin4 => Axis {
                min: 0.1,
                max: 10.0,
                scale: Scale::Log,
            },
            Family::Sq4 => Axis {
                min: 0.0,
                max: FRAC_PI_2,
                scale: Scale::Linear,
            },
        }
    }

    /// `ḡz`.
    pub fn default_y() -> Axis {
        Axis {
            min: 0.0,
            max: 3.0,
            scale: Scale::Linear,
        }
    }

    fn check(&self, name: &str) -> CliResult<()> {
        let ok = self.min.is_finite() && self.max.is_finite() && self.min < self.max;
        if !ok {
            return Err(CliError::Usage(format!("{name}-axis needs finite min < max")));
        }
        if self.scale == Scale::Log && !(self.min > 0.0) {
            return Err(CliError::Usage(format!("{name}-axis: log scale needs min > 0")));
        }
        Ok(())
    }

    /// `n` strictly increasing points including both ends.
    pub fn points(&self, n: usize) -> Vec<f64> {
        let t = |i: usize| i as f64 / (n - 1) as f64;
        match self.scale {
            Scale::Linear => (0..n).map(|i| self.min * (1.0 - t(i)) + self.max * t(i)).collect(),
            Scale::Log => {
                // base 10 so that decades land exactly on powers of ten
                let (a, b) = (self.min.log10(), self.max.log10());
                (0..n)
                    .map(|i| match i {
                        0 => self.min,
                        _ if i == n - 1 => self.max,
                        _ => 10f64.powf(a * (1.0 - t(i)) + b * t(i)),
                    })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    NuProduct,
    LogNegativity,
    BoundVerdicts,
}

impl Output {
    pub const ALL: [Output; 3] = [Output::NuProduct, Output::LogNegativity, Output::BoundVerdicts];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionSelection {
    /// Only `"all"` is accepted.
    Keyword(String),
    Labels(Vec<String>),
}

impl Default for PartitionSelection {
    fn default() -> Self {
        PartitionSelection::Keyword("all".into())
    }
}

impl PartitionSelection {
    pub fn resolve(&self, family: Family) -> CliResult<Vec<ModePartition>> {
        match self {
            PartitionSelection::Keyword(k) if k.eq_ignore_ascii_case("all") => Ok(family.partitions()),
            PartitionSelection::Keyword(k) => Ok(vec![family.parse_partition(k)?]),
            PartitionSelection::Labels(labels) => {
                if labels.is_empty() {
                    return Err(CliError::Usage("partition list is empty".into()));
                }
                let mut out: Vec<ModePartition> = Vec::new();
                for l in labels {
                    let p = family.parse_partition(l)?;
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family: Family,
    #[serde(default)]
    pub x_axis: Option<Axis>,
    #[serde(default)]
    pub y_axis: Option<Axis>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub partitions: PartitionSelection,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

fn default_outputs() -> Vec<Output> {
    Output::ALL.to_vec()
}

impl SweepSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            x_axis: None,
            y_axis: None,
            resolution: DEFAULT_RESOLUTION,
            partitions: PartitionSelection::default(),
            outputs: default_outputs(),
        }
    }

    pub fn from_json_str(s: &str) -> CliResult<Self> {
        let spec: SweepSpec = serde_json::from_str(s).map_err(|e| CliError::Usage(format!("sweep spec: {e}")))?;
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> CliResult<()> {
        if self.resolution < 2 {
            return Err(CliError::Usage(format!("resolution must be ≥ 2, got {}", self.resolution)));
        }
        self.x().check("x")?;
        self.y().check("y")?;
        if self.y().min < 0.0 {
            return Err(CliError::Usage("y-axis (ḡz) must be ≥ 0".into()));
        }
        self.partitions.resolve(self.family)?;
        Ok(())
    }

    pub fn x(&self) -> Axis {
        self.x_axis.unwrap_or_else(|| Axis::default_x(self.family))
    }

    pub fn y(&self) -> Axis {
        self.y_axis.unwrap_or_else(Axis::default_y)
    }
}

/// The state at grid point `(x, y)`: tri/lin4 take `x = |g₂/g₁|`,
/// `y = ḡz`; sq4 takes `x = φ₋`, `y = ḡz` with `g_mag = 1/√2` so `ḡ = 1`.
pub fn state_at(family: Family, x: f64, y: f64) -> CliResult<StateSpec> {
    Ok(match family {
        Family::Tri => StateSpec::Tri(TripartiteParams::from_ratio(x, y)?),
        Family::Lin4 => StateSpec::Lin4(FourModeLinearParams::from_ratio(x, y)?),
        Family::Sq4 => StateSpec::Sq4(FourModeSquareParams::new(FRAC_1_SQRT_2, x, y)?),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub y: f64,
    pub result: PartitionResult,
}

/// Rows ordered `y` outer, `x` inner, partitions innermost.
pub fn run(spec: &SweepSpec, eval: &Evaluator) -> CliResult<Vec<SweepRow>> {
    spec.check()?;
    let partitions = spec.partitions.resolve(spec.family)?;
    let xs = spec.x().points(spec.resolution);
    let ys = spec.y().points(spec.resolution);
    let points: Vec<(f64, f64)> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect();
    let chunks = points
        .par_iter()
        .map(|&(x, y)| {
            let st = state_at(spec.family, x, y)?;
            let rows = eval.evaluate(&st, &partitions)?;
            Ok(rows.into_iter().map(|result| SweepRow { x, y, result }).collect::<Vec<_>>())
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(w: &mut W, spec: &SweepSpec, rows: &[SweepRow]) -> std::io::Result<()> {
    let want = |o: Output| spec.outputs.contains(&o);
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        let r = &row.result;
        let nu = if want(Output::NuProduct) { num(r.nu_product) } else { String::new() };
        let en = if want(Output::LogNegativity) { num(r.log_negativity) } else { String::new() };
        let bv = match (&r.bound, want(Output::BoundVerdicts)) {
            (Some(b), true) => b.violated.to_string(),
            _ => String::new(),
        };
        // labels contain commas
        let label = spec.family.partition_label(&r.partition);
        writeln!(
            w,
            "{},{},{},\"{}\",{},{},{}",
            spec.family,
            num(row.x),
            num(row.y),
            label,
            nu,
            en,
            bv
        )?;
    }
    Ok(())
}

pub fn to_csv_string(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, spec, rows).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

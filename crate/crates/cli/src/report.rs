use serde::Serialize;

use cvgauss::factory::StateSpec;
use cvgauss::Family;

use crate::error::CliResult;
use crate::eval::{Evaluator, PartitionResult};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionEntry {
    pub label: String,
    pub spectrum_pt: Vec<f64>,
    pub nu_sub_unity: Vec<f64>,
    pub nu_product: f64,
    pub log_negativity: f64,
    pub entangled: bool,
    pub bound_label: Option<String>,
    pub bound_lhs: Option<f64>,
    pub bound_rhs: Option<f64>,
    pub bound_violated: Option<bool>,
}

impl PartitionEntry {
    fn new(family: Family, r: PartitionResult) -> Self {
        let b = r.bound;
        Self {
            label: family.partition_label(&r.partition),
            spectrum_pt: r.spectrum_pt,
            nu_sub_unity: r.sub_unity,
            nu_product: r.nu_product,
            log_negativity: r.log_negativity,
            entangled: r.entangled,
            bound_label: b.as_ref().map(|b| b.label.clone()),
            bound_lhs: b.as_ref().map(|b| b.lhs),
            bound_rhs: b.as_ref().map(|b| b.rhs),
            bound_violated: b.as_ref().map(|b| b.violated),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub family: Family,
    pub spec: StateSpec,
    pub partitions: Vec<PartitionEntry>,
    /// Every bipartition of the state is PPT-entangled, whether or not it
    /// was selected for output.
    pub genuine: bool,
}

/// `partition` is a label or `"all"`.
pub fn report(spec: &StateSpec, partition: &str, eval: &Evaluator) -> CliResult<Report> {
    let family = spec.family();
    let all = family.partitions();
    let selected = if partition.eq_ignore_ascii_case("all") {
        None
    } else {
        Some(family.parse_partition(partition)?)
    };
    let results = eval.evaluate(spec, &all)?;
    let genuine = results.iter().all(|r| r.entangled);
    let partitions = results
        .into_iter()
        .filter(|r| selected.as_ref().is_none_or(|a| &r.partition == a))
        .map(|r| PartitionEntry::new(family, r))
        .collect();
    Ok(Report {
        family,
        spec: *spec,
        partitions,
        genuine,
    })
}

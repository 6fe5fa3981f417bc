//! Entanglement criteria: variance bounds on nonlocal observables and the
//! closed-form PT spectra of the three families.

mod analytic;
mod bounds;
mod suites;

pub use analytic::{analytic_pt_spectrum, negativity_p13};
pub use bounds::{
    evaluate_bound, heisenberg_bound, observable_variance, ppt_bound, variance_lhs, BoundEvaluation, BoundKind,
    NonlocalObservable, VIOLATION_TOL,
};
pub use suites::{
    closed_form_verdict, four_mode_bound_suite, four_mode_bound_suite_on, four_mode_observables,
    tripartite_bound_suite, tripartite_bound_suite_on, tripartite_observables, tripartite_thresholds, BoundPair,
    FourModeBoundSuite, PartitionBounds, TripartiteBoundSuite,
};

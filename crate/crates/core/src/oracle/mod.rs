//! Independent ground truth: exact concrete runs, trace classes, brute-force
//! aggregated zones, and reproductions of two unsound local-zone
//! abstractions.

mod aggregation;
pub mod laws;
mod minea;
pub mod random;
pub mod suites;
mod timing;
mod traces;
mod translation;
mod valuation;

pub use aggregation::{check_aggregation_theorem, global_path, mz_bruteforce, AggregationVerdict, Federation};
pub use minea::{
    delay_grid, demo_minea_maximization_flaw, demo_region_flaw, fig2_zone_after_b1b2, maximize_zone, region_equiv,
    MaximizationReport, MaximizedSemantics, RegionFlawReport, RegionMode,
};
pub use timing::{
    discretely_enabled, global_word, local_word, sample_point, schedule, DiffSystem, EndSpec, Pick, Schedule, StartSpec,
    Timeline,
};
pub use traces::{equivalent, trace_class, TraceBoundExceeded, DEFAULT_TRACE_BOUND};
pub use translation::{
    check_global_to_local, check_independence, check_local_to_global, check_translations, check_zone_runs, replay_witness,
    LawReport,
};
pub use valuation::{
    exec_global, exec_global_from, exec_local, exec_local_from, expand_global_word, global_of, local_of, rat, GlobalStep,
    LocalStep, Rational, Stuck, Trace, Valuation,
};

#[cfg(test)]
mod tests;

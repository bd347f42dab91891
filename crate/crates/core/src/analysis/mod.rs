//! Closed-form bounds on the adversary's success probability, their
//! inversion for the number of samples, and light-node download costs.

mod bounds;
mod cost;
mod tables;

pub use bounds::{
    asp_bound, asp_bound_original, asp_bound_recomputed, binary_entropy, dominance_check, min_samples, BoundKind,
    BoundParams,
};
pub use cost::{header_size, sampling_cost, total_download, CostParams, SamplingCost, TotalDownload};
pub use tables::{
    asbk_reference, reference_data, reproduce_table, Adversary, AsbkReference, ReferenceData, Scenario, TableCell,
    TableId, TableReport, COST_TOLERANCE,
};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no sample count brings the bound below {gamma}")]
    Unreachable { gamma: f64 },
}

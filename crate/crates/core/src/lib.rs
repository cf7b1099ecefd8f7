//! Community detection by label propagation.
//!
//! Two engines share one asynchronous propagation loop:
//!
//! * [`run_lpa`]: classic LPA, every node starts with its own label.
//! * [`run_ili_lpa`]: identical label initialization. Before propagating,
//!   a node hands its label to a neighbor when the directed link similarity
//!   `tsi(i, j) = (1 + |N(i) ∩ N(j)|) / |N(j)|` is at least the reverse
//!   value and at least a threshold `beta`. Densely linked regions start
//!   out sharing a label, which removes much of the run-to-run variance.
//!
//! Around the engines sit the evaluation pieces: modularity and NMI,
//! a planted-partition benchmark generator, and a multi-seed harness.

pub mod datasets;
pub mod error;
pub mod generator;
pub mod graph;
pub mod harness;
pub mod lpa;
pub mod metrics;
pub mod similarity;

pub use error::{Error, Result};
pub use generator::{generate, ingest_lfr, mixing_fraction, PlantedPartitionSpec};
pub use graph::{common_neighbors, load_edge_list, load_ground_truth, open_input, Graph, GroundTruth, IngestStats, NodeId};
pub use harness::{
    collapse_point, mu_sweep, run_experiment, run_on, Algorithm, Dataset, ExperimentConfig, ExperimentOutcome,
    Input, StabilityReport, Summary, SweepRow, Timing, TrialResult,
};
pub use lpa::{
    init_identical, init_unique, is_majority_fixed_point, propagate, propagate_with, run_ili_lpa, run_lpa,
    Labeling, RunReport, Vote, DEFAULT_MAX_ITER,
};
pub use metrics::{community_count, modularity, nmi, Partition};
pub use similarity::{compute_tsi_table, tsi, Beta, Tsi, TsiTable};

//! Estimation of state-propagation graphs from per-individual state time
//! series.
//!
//! For every pair of individuals the delay of one series from the other is
//! summed over matched positions and averaged exactly over all
//! minimum-cost alignments ([`alignment`]). Positive averages orient edges,
//! a density-derived threshold and greedy removal of indirectly explained
//! edges prune them, and the survivors are partitioned into propagation
//! layers ([`graph`]).

pub mod alignment;
pub mod baseline;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod preprocess;
pub mod synth;

pub use alignment::{align_stats, AlignMode, AlignmentStats, CostModel, StateSequence};
pub use error::{Error, Result};
pub use graph::{estimate_graph, EstimateConfig, GraphEstimate, KdeConfig, PropagationGraph};

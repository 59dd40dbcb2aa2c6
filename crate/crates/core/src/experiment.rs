//! Running both estimators on the synthetic corpora and scoring them.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alignment::{CostModel, StateSequence};
use crate::baseline::baseline_graph;
use crate::error::Result;
use crate::graph::{
    estimate_graph, partition_layers, AdMatrix, EstimateConfig, GraphEstimate, LayerPartition,
    PropagationGraph,
};
use crate::metrics::{layer_metrics, maeatd, mean_ci, precision_recall_f, EvalReport, MeanCi};
use crate::synth::{gen_binary, gen_real_valued, BinaryParams, DelayTrace};

pub use crate::synth::REAL_MAX_DELAY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Delay sums averaged over minimum-cost alignments.
    Proposed,
    /// Constant circular-shift delay.
    Baseline,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Proposed => "proposed",
            Method::Baseline => "baseline",
        })
    }
}

pub fn run_method(
    method: Method,
    sequences: &[StateSequence],
    model: &CostModel,
    config: &EstimateConfig,
) -> Result<GraphEstimate> {
    match method {
        Method::Proposed => estimate_graph(sequences, model, config),
        Method::Baseline => baseline_graph(sequences, config),
    }
}

/// Delay-sum estimate for edge `(i, j)` entering MAEATD: the averaged delay
/// sum itself, or the constant shift spread over `T - a` steps.
pub fn delay_sum_estimate(
    method: Method,
    ad: &AdMatrix,
    i: usize,
    j: usize,
    length: usize,
    max_delay: usize,
) -> f64 {
    let v = ad.get(i, j);
    match method {
        Method::Proposed => v,
        Method::Baseline => (length - max_delay) as f64 * v,
    }
}

/// Scores an estimate against a ground-truth graph, plus MAEATD when
/// delay traces are known.
pub fn evaluate(
    method: Method,
    truth: &PropagationGraph,
    est: &GraphEstimate,
    delays: Option<(&BTreeMap<(usize, usize), DelayTrace>, usize, usize)>,
) -> Result<EvalReport> {
    evaluate_parts(method, truth, &est.ad, &est.graph, &est.layers, delays)
}

/// [`evaluate`] over the pieces of an estimate, e.g. one read back from disk.
pub fn evaluate_parts(
    method: Method,
    truth: &PropagationGraph,
    ad: &AdMatrix,
    graph: &PropagationGraph,
    layers: &LayerPartition,
    delays: Option<(&BTreeMap<(usize, usize), DelayTrace>, usize, usize)>,
) -> Result<EvalReport> {
    let edges = precision_recall_f(&truth.edge_set(), &graph.edge_set());
    let layers = layer_metrics(&partition_layers(truth), layers)?;
    let mae = match delays {
        Some((traces, length, max_delay)) => {
            let sums: BTreeMap<_, _> = traces
                .iter()
                .map(|(&k, tr)| (k, tr.sum_from(max_delay) as f64))
                .collect();
            Some(maeatd(
                &sums,
                |i, j| Some(delay_sum_estimate(method, ad, i, j, length, max_delay)),
                length,
                max_delay,
            )?)
        }
        None => None,
    };
    Ok(EvalReport::new(edges, layers, mae))
}

pub fn run_real(seed: u64, method: Method, config: &EstimateConfig) -> Result<EvalReport> {
    let bench = gen_real_valued(seed);
    let est = run_method(method, &bench.sequences, &CostModel::warping_abs(), config)?;
    let t = bench.sequences[0].len();
    evaluate(
        method,
        &bench.true_graph(),
        &est,
        Some((&bench.true_delays, t, REAL_MAX_DELAY)),
    )
}

pub const BINARY_ALPHA: f64 = 3.0;

pub fn run_binary(
    params: &BinaryParams,
    seed: u64,
    method: Method,
    config: &EstimateConfig,
) -> Result<EvalReport> {
    let bench = gen_binary(params, seed)?;
    let est = run_method(
        method,
        &bench.sequences,
        &CostModel::gap_binary(BINARY_ALPHA),
        config,
    )?;
    evaluate(method, &bench.true_graph(), &est, None)
}

/// Mean ± 95% CI of every measure over a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub model: String,
    pub p: Option<f64>,
    pub method: Method,
    pub datasets: usize,
    pub maeatd: Option<MeanCi>,
    pub precision: MeanCi,
    pub recall: MeanCi,
    pub f_measure: MeanCi,
    pub layer_accuracy: MeanCi,
    pub mean_layer_difference: MeanCi,
}

impl BenchRow {
    pub fn aggregate(model: &str, p: Option<f64>, method: Method, reports: &[EvalReport]) -> Self {
        let col = |f: fn(&EvalReport) -> f64| mean_ci(&reports.iter().map(f).collect::<Vec<_>>());
        let mae: Option<Vec<f64>> = reports.iter().map(|r| r.maeatd).collect();
        Self {
            model: model.to_owned(),
            p,
            method,
            datasets: reports.len(),
            maeatd: mae.map(|v| mean_ci(&v)),
            precision: col(|r| r.precision),
            recall: col(|r| r.recall),
            f_measure: col(|r| r.f_measure),
            layer_accuracy: col(|r| r.layer_accuracy),
            mean_layer_difference: col(|r| r.mean_layer_difference),
        }
    }
}

/// Reports per seed, in seed order. Datasets run in parallel.
pub fn batch_real(seeds: &[u64], method: Method, config: &EstimateConfig) -> Result<Vec<EvalReport>> {
    seeds
        .par_iter()
        .map(|&s| run_real(s, method, config))
        .collect()
}

pub fn batch_binary(
    params: &BinaryParams,
    seeds: &[u64],
    method: Method,
    config: &EstimateConfig,
) -> Result<Vec<EvalReport>> {
    seeds
        .par_iter()
        .map(|&s| run_binary(params, s, method, config))
        .collect()
}

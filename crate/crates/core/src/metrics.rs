//! Delay-, edge- and layer-level agreement between an estimate and the
//! ground truth.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LayerPartition;

/// Mean absolute error of summed delays over true edges, normalized by
/// `|E| * (T - a)`.
///
/// `true_sums[(i, j)]` is `Σ_{t=a}^{T} Δ_{i,j}[t]`; `estimate(i, j)` returns
/// the estimated sum for the same edge.
pub fn maeatd(
    true_sums: &BTreeMap<(usize, usize), f64>,
    estimate: impl Fn(usize, usize) -> Option<f64>,
    length: usize,
    max_delay: usize,
) -> Result<f64> {
    if true_sums.is_empty() {
        return Err(Error::EmptyInput("no true edges for MAEATD"));
    }
    if length <= max_delay {
        return Err(Error::InvalidParameter(format!(
            "series length {length} must exceed the maximum delay {max_delay}"
        )));
    }
    let mut total = 0.0;
    for (&(src, dst), &truth) in true_sums {
        let est = estimate(src, dst).ok_or(Error::MissingEstimate { src, dst })?;
        total += (est - truth).abs();
    }
    Ok(total / (true_sums.len() as f64 * (length - max_delay) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeScores {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// The estimate had no edges, so precision was set to 0.
    pub empty_estimate: bool,
}

/// Direction-sensitive precision, recall and their harmonic mean. Empty
/// denominators give 0.
pub fn precision_recall_f(
    true_edges: &BTreeSet<(usize, usize)>,
    estimated: &BTreeSet<(usize, usize)>,
) -> EdgeScores {
    let hits = true_edges.intersection(estimated).count() as f64;
    let ratio = |den: usize| if den == 0 { 0.0 } else { hits / den as f64 };
    let precision = ratio(estimated.len());
    let recall = ratio(true_edges.len());
    let f_measure = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    EdgeScores {
        precision,
        recall,
        f_measure,
        empty_estimate: estimated.is_empty(),
    }
}

/// Layer accuracy (fraction of vertices with the same layer index) and
/// mean absolute layer-index difference.
pub fn layer_metrics(truth: &LayerPartition, estimate: &LayerPartition) -> Result<(f64, f64)> {
    if truth.n() != estimate.n() {
        return Err(Error::CoverMismatch {
            left: truth.n(),
            right: estimate.n(),
        });
    }
    let n = truth.n();
    if n == 0 {
        return Ok((1.0, 0.0));
    }
    let mut same = 0usize;
    let mut diff = 0usize;
    for (&a, &b) in truth.layer_of.iter().zip(&estimate.layer_of) {
        if a == b {
            same += 1;
        }
        diff += a.abs_diff(b);
    }
    Ok((same as f64 / n as f64, diff as f64 / n as f64))
}

/// All measures for one dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Only available when true delay traces exist.
    pub maeatd: Option<f64>,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub layer_accuracy: f64,
    pub mean_layer_difference: f64,
    pub empty_estimate: bool,
}

impl EvalReport {
    pub fn new(edges: EdgeScores, layers: (f64, f64), maeatd: Option<f64>) -> Self {
        Self {
            maeatd,
            precision: edges.precision,
            recall: edges.recall,
            f_measure: edges.f_measure,
            layer_accuracy: layers.0,
            mean_layer_difference: layers.1,
            empty_estimate: edges.empty_estimate,
        }
    }
}

/// Mean and normal-approximation 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCi {
    pub mean: f64,
    pub half_width: f64,
}

pub fn mean_ci(values: &[f64]) -> MeanCi {
    let n = values.len();
    if n == 0 {
        return MeanCi {
            mean: f64::NAN,
            half_width: f64::NAN,
        };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return MeanCi {
            mean,
            half_width: 0.0,
        };
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    MeanCi {
        mean,
        half_width: 1.96 * (var / n as f64).sqrt(),
    }
}

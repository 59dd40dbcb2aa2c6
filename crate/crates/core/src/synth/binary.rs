use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::real::truth_graph;
use crate::alignment::StateSequence;
use crate::error::{Error, Result};
use crate::graph::PropagationGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryParams {
    /// Propagation probability per opportunity.
    pub p: f64,
    /// Side of the square arena `[0, M]^2`.
    pub arena: f64,
    pub individuals: usize,
    pub length: usize,
    /// Distance within which a firing can propagate.
    pub radius: f64,
    /// The source fires when `t mod period == 1`.
    pub period: usize,
    /// Minimum gap between two firings of one individual.
    pub refractory: usize,
}

impl BinaryParams {
    pub fn new(p: f64) -> Self {
        Self {
            p,
            ..Self::default()
        }
    }
}

impl Default for BinaryParams {
    fn default() -> Self {
        Self {
            p: 0.95,
            arena: 100.0,
            individuals: 50,
            length: 200,
            radius: 35.0,
            period: 10,
            refractory: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BinaryBenchmark {
    pub seed: u64,
    pub params: BinaryParams,
    pub sequences: Vec<StateSequence>,
    pub locations: Vec<[f64; 2]>,
}

impl BinaryBenchmark {
    pub fn states(&self, i: usize) -> impl Iterator<Item = bool> + '_ {
        self.sequences[i].values().iter().map(|&v| v >= 0.5)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.locations[i], self.locations[j]);
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }

    pub fn true_edges(&self) -> Vec<(usize, usize)> {
        ground_truth_binary(self)
    }

    pub fn true_graph(&self) -> PropagationGraph {
        truth_graph(self.sequences.len(), &self.true_edges())
    }
}

/// Binary propagation dataset.
///
/// Individual 0 fires at `t ≡ 1 (mod period)`. All others update
/// synchronously: at time `t` an individual fires with probability `p` if
/// some individual within `radius` fired at `t - 1` and it has not itself
/// fired in the last `refractory` steps. Nobody but the source can fire at
/// `t = 1`.
pub fn gen_binary(params: &BinaryParams, seed: u64) -> Result<BinaryBenchmark> {
    if !(params.p > 0.0 && params.p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "propagation probability must be in (0, 1], got {}",
            params.p
        )));
    }
    if !(params.arena > 0.0 && params.arena.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "arena size must be positive, got {}",
            params.arena
        )));
    }
    if params.individuals < 2 || params.length < 1 || params.period == 0 {
        return Err(Error::InvalidParameter(
            "need at least 2 individuals, 1 time step and a positive period".into(),
        ));
    }
    let (n, len) = (params.individuals, params.length);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let locations: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            let x = rng.random_range(0.0..=params.arena);
            let y = rng.random_range(0.0..=params.arena);
            [x, y]
        })
        .collect();

    let within = |i: usize, j: usize| {
        let (a, b) = (locations[i], locations[j]);
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() <= params.radius
    };
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && within(i, j)).collect())
        .collect();

    // fired[i][t - 1] is s_i[t].
    let mut fired = vec![vec![false; len]; n];
    for t in 1..=len {
        fired[0][t - 1] = t % params.period == 1 % params.period;
    }
    let mut last_fire: Vec<Option<usize>> = vec![None; n];
    for t in 2..=len {
        for i in 1..n {
            let triggered = neighbours[i].iter().any(|&j| fired[j][t - 2]);
            let rested = last_fire[i].is_none_or(|l| t - l > params.refractory);
            if triggered && rested && (params.p >= 1.0 || rng.random_bool(params.p)) {
                fired[i][t - 1] = true;
            }
        }
        for (i, row) in fired.iter().enumerate().skip(1) {
            if row[t - 1] {
                last_fire[i] = Some(t);
            }
        }
    }

    let sequences = fired
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let v = row.into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect();
            StateSequence::new(format!("c{}", i + 1), v).expect("binary states are finite")
        })
        .collect();
    Ok(BinaryBenchmark {
        seed,
        params: *params,
        sequences,
        locations,
    })
}

/// Edges `i -> j` where `j` fired right after `i` (within strictly less than
/// `radius`) more often than the other way round.
pub fn ground_truth_binary(bench: &BinaryBenchmark) -> Vec<(usize, usize)> {
    let n = bench.sequences.len();
    let states: Vec<Vec<bool>> = (0..n).map(|i| bench.states(i).collect()).collect();
    let mut caused = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || bench.distance(i, j) >= bench.params.radius {
                continue;
            }
            caused[i][j] = (1..states[j].len())
                .filter(|&t| states[i][t - 1] && states[j][t])
                .count();
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if caused[i][j] > caused[j][i] {
                edges.push((i, j));
            }
        }
    }
    edges
}

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::alignment::StateSequence;
use crate::graph::{Edge, PropagationGraph};

pub const REAL_N: usize = 10;
pub const REAL_T: usize = 100;
/// Largest delay the real-valued model can produce.
pub const REAL_MAX_DELAY: usize = 2;

/// Ground-truth DAG of the real-valued model, 0-based. Vertex 0 is the
/// source; layers are {0}, {1,2,3}, {4,5,6}, {7,8,9}.
pub const REAL_EDGES: [(usize, usize); 12] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 4),
    (2, 4),
    (2, 5),
    (3, 6),
    (4, 7),
    (5, 7),
    (5, 8),
    (6, 8),
    (6, 9),
];

/// Per-step delay of one edge, for time steps `first_t..=T` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelayTrace {
    pub first_t: usize,
    pub values: Vec<u32>,
}

impl DelayTrace {
    /// `Σ_{t=from}^{T} Δ[t]`.
    pub fn sum_from(&self, from: usize) -> u64 {
        let skip = from.saturating_sub(self.first_t);
        self.values.iter().skip(skip).map(|&d| u64::from(d)).sum()
    }
}

#[derive(Debug, Clone)]
pub struct RealValuedBenchmark {
    pub seed: u64,
    pub sequences: Vec<StateSequence>,
    pub true_edges: Vec<(usize, usize)>,
    pub true_delays: BTreeMap<(usize, usize), DelayTrace>,
}

impl RealValuedBenchmark {
    pub fn true_graph(&self) -> PropagationGraph {
        truth_graph(self.sequences.len(), &self.true_edges)
    }
}

pub(crate) fn truth_graph(n: usize, edges: &[(usize, usize)]) -> PropagationGraph {
    PropagationGraph::from_edges(
        n,
        edges.iter().map(|&(src, dst)| Edge { src, dst, ad: 1.0 }),
    )
}

pub fn real_valued_truth() -> PropagationGraph {
    truth_graph(REAL_N, &REAL_EDGES)
}

fn ids() -> impl Iterator<Item = String> {
    (1..=REAL_N).map(|i| format!("s{i}"))
}

/// Real-valued dataset: the source is `N(0, 5^2)` noise and every other
/// series averages its in-neighbours at a per-edge delay of 1 or 2 steps,
/// plus `N(0, 1)` noise. Each delay keeps its value with probability 3/4
/// per step and flips otherwise.
pub fn gen_real_valued(seed: u64) -> RealValuedBenchmark {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wide = Normal::new(0.0, 5.0).expect("valid normal");
    let unit = Normal::new(0.0, 1.0).expect("valid normal");

    let mut parents = vec![Vec::new(); REAL_N];
    for &(s, d) in &REAL_EDGES {
        parents[d].push(s);
    }
    let mut series: Vec<Vec<f64>> = vec![Vec::new(); REAL_N];
    series[0] = (0..REAL_T).map(|_| wide.sample(&mut rng)).collect();

    let mut true_delays = BTreeMap::new();
    let mut pending: Vec<usize> = (1..REAL_N).collect();
    while !pending.is_empty() {
        // Lowest-numbered vertex whose parents are all generated.
        let pos = pending
            .iter()
            .position(|&v| parents[v].iter().all(|p| !pending.contains(p)))
            .expect("ground truth is acyclic");
        let v = pending.remove(pos);

        let mut s = vec![wide.sample(&mut rng), wide.sample(&mut rng)];
        let mut delay: Vec<u32> = parents[v]
            .iter()
            .map(|_| if rng.random_bool(0.5) { 1 } else { 2 })
            .collect();
        let mut traces: Vec<Vec<u32>> = delay.iter().map(|&d| vec![d]).collect();
        for t in 3..=REAL_T {
            for (k, d) in delay.iter_mut().enumerate() {
                if rng.random_bool(0.25) {
                    *d = *d % 2 + 1;
                }
                traces[k].push(*d);
            }
            let eps = unit.sample(&mut rng);
            let mean = parents[v]
                .iter()
                .zip(&delay)
                .map(|(&p, &d)| series[p][t - 1 - d as usize])
                .sum::<f64>()
                / parents[v].len() as f64;
            s.push(mean + eps);
        }
        series[v] = s;
        for (&p, trace) in parents[v].iter().zip(traces) {
            true_delays.insert(
                (p, v),
                DelayTrace {
                    first_t: 2,
                    values: trace,
                },
            );
        }
    }

    let sequences = ids()
        .zip(series)
        .map(|(id, v)| StateSequence::new(id, v).expect("finite samples"))
        .collect();
    RealValuedBenchmark {
        seed,
        sequences,
        true_edges: REAL_EDGES.to_vec(),
        true_delays,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::partition_layers;

    #[test]
    fn shape_and_truth() {
        let b = gen_real_valued(7);
        assert_eq!(b.sequences.len(), 10);
        assert!(b.sequences.iter().all(|s| s.len() == 100));
        assert_eq!(b.true_edges, REAL_EDGES.to_vec());
        let layers = partition_layers(&b.true_graph());
        assert_eq!(layers.layers.len(), 4);
        assert_eq!(layers.layers[0], vec![0]);
    }

    #[test]
    fn delays_only_one_or_two() {
        let b = gen_real_valued(3);
        assert_eq!(b.true_delays.len(), 12);
        for trace in b.true_delays.values() {
            assert_eq!(trace.values.len(), 99);
            assert!(trace.values.iter().all(|&d| d == 1 || d == 2));
        }
    }

    #[test]
    fn reproducible() {
        let a = gen_real_valued(11);
        let b = gen_real_valued(11);
        assert_eq!(a.sequences, b.sequences);
        assert_eq!(a.true_delays, b.true_delays);
        assert_ne!(a.sequences, gen_real_valued(12).sequences);
    }

    #[test]
    fn follower_tracks_delayed_parent() {
        // Vertex 3 has the single parent 0, so residuals are unit noise.
        let b = gen_real_valued(5);
        let trace = &b.true_delays[&(0, 3)];
        let (src, dst) = (b.sequences[0].values(), b.sequences[3].values());
        let mut ss = 0.0;
        for t in 3..=REAL_T {
            let d = trace.values[t - 2] as usize;
            let r = dst[t - 1] - src[t - 1 - d];
            ss += r * r;
        }
        let var = ss / 98.0;
        assert!(var > 0.5 && var < 1.6, "residual variance {var}");
    }

    #[test]
    fn trace_sum() {
        let t = DelayTrace {
            first_t: 2,
            values: vec![1, 2, 2, 1],
        };
        assert_eq!(t.sum_from(2), 6);
        assert_eq!(t.sum_from(3), 5);
    }
}

//! From pairwise delay averages to a layered propagation graph.

mod ad;
mod kde;
mod layers;
mod pipeline;
mod prune;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub(crate) use ad::check_dataset;
pub use ad::{compute_ad_matrix, orient_edges, AdMatrix};
pub use kde::{estimate_threshold, gaussian_kde, KdeConfig, ThresholdEstimate};
pub use layers::{partition_layers, remove_intralayer, LayerPartition};
pub use pipeline::{estimate_graph, estimate_graph_from_matrix, EstimateConfig, GraphEstimate, ThetaSource};
pub use prune::{has_indirect_path, prune_indirect, PathUniverse};

/// A directed edge with the delay value that oriented it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub ad: f64,
}

/// Oriented edges over vertices `0..n`, keyed by `(src, dst)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PropagationGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
    theta: Option<f64>,
}

impl PropagationGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: BTreeMap::new(),
            theta: None,
        }
    }

    /// Builds a graph from an edge list. Self-loops are rejected and a later
    /// `(j, i)` replaces an earlier `(i, j)`, so at most one direction exists.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut g = Self::new(n);
        for e in edges {
            g.insert(e.src, e.dst, e.ad);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    pub fn set_theta(&mut self, theta: f64) {
        self.theta = Some(theta);
    }

    pub fn insert(&mut self, src: usize, dst: usize, ad: f64) {
        assert!(src < self.n && dst < self.n, "vertex out of range");
        assert_ne!(src, dst, "self-loops are not allowed");
        self.edges.remove(&(dst, src));
        self.edges.insert((src, dst), ad);
    }

    pub fn remove(&mut self, src: usize, dst: usize) -> Option<f64> {
        self.edges.remove(&(src, dst))
    }

    pub fn contains(&self, src: usize, dst: usize) -> bool {
        self.edges.contains_key(&(src, dst))
    }

    pub fn weight(&self, src: usize, dst: usize) -> Option<f64> {
        self.edges.get(&(src, dst)).copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .map(|(&(src, dst), &ad)| Edge { src, dst, ad })
    }

    pub fn edge_set(&self) -> std::collections::BTreeSet<(usize, usize)> {
        self.edges.keys().copied().collect()
    }

    /// Out-neighbour lists.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for &(s, d) in self.edges.keys() {
            out[s].push(d);
        }
        out
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(_, d) in self.edges.keys() {
            deg[d] += 1;
        }
        deg
    }
}

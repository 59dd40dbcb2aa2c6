use serde::{Deserialize, Serialize};

use super::PropagationGraph;

/// Disjoint layers covering every vertex, with `layer_of[v]` the index of
/// the layer containing `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerPartition {
    pub layer_of: Vec<usize>,
    pub layers: Vec<Vec<usize>>,
}

impl LayerPartition {
    pub fn from_layer_of(layer_of: Vec<usize>) -> Self {
        let count = layer_of.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut layers = vec![Vec::new(); count];
        for (v, &l) in layer_of.iter().enumerate() {
            layers[l].push(v);
        }
        Self { layer_of, layers }
    }

    pub fn n(&self) -> usize {
        self.layer_of.len()
    }
}

/// Partitions vertices into propagation layers.
///
/// Layer 0 holds the vertices with no incoming edge. If every vertex has
/// one, layer 0 is instead the vertices whose largest incoming value is the
/// smallest. Layer `k` holds the unassigned vertices with an edge from layer
/// `k - 1`. Vertices never reached this way share one final layer.
pub fn partition_layers(g: &PropagationGraph) -> LayerPartition {
    let n = g.n();
    if n == 0 {
        return LayerPartition::from_layer_of(Vec::new());
    }
    let mut first: Vec<usize> = g
        .in_degrees()
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d == 0)
        .map(|(v, _)| v)
        .collect();
    if first.is_empty() {
        let mut max_in = vec![f64::NEG_INFINITY; n];
        for e in g.edges() {
            max_in[e.dst] = max_in[e.dst].max(e.ad);
        }
        let lowest = max_in.iter().copied().fold(f64::INFINITY, f64::min);
        first = (0..n).filter(|&v| max_in[v] == lowest).collect();
    }

    const UNASSIGNED: usize = usize::MAX;
    let succ = g.successors();
    let mut layer_of = vec![UNASSIGNED; n];
    for &v in &first {
        layer_of[v] = 0;
    }
    let mut frontier = first;
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in &succ[v] {
                if layer_of[w] == UNASSIGNED {
                    layer_of[w] = depth;
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    // `depth` is one past the last non-empty layer here.
    for l in layer_of.iter_mut().filter(|l| **l == UNASSIGNED) {
        *l = depth;
    }
    LayerPartition::from_layer_of(layer_of)
}

/// Drops every edge whose endpoints share a layer. The partition is not
/// recomputed.
pub fn remove_intralayer(g: &PropagationGraph, layers: &LayerPartition) -> PropagationGraph {
    let mut out = g.clone();
    for e in g.edges() {
        if layers.layer_of[e.src] == layers.layer_of[e.dst] {
            out.remove(e.src, e.dst);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> PropagationGraph {
        PropagationGraph::from_edges(
            n,
            edges.iter().map(|&(src, dst, ad)| Edge { src, dst, ad }),
        )
    }

    #[test]
    fn chain() {
        let p = partition_layers(&graph(3, &[(0, 1, 1.0), (1, 2, 1.0)]));
        assert_eq!(p.layers, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn cycle_uses_smallest_max_incoming() {
        // 0->1 (7), 1->2 (9), 2->0 (5): vertex 0's max incoming is 5.
        let p = partition_layers(&graph(3, &[(0, 1, 7.0), (1, 2, 9.0), (2, 0, 5.0)]));
        assert_eq!(p.layers, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn unreachable_cycle_gets_trailing_layer() {
        // 0 -> 1, and a 2-3-4 cycle nobody feeds.
        let p = partition_layers(&graph(
            5,
            &[(0, 1, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 2, 1.0)],
        ));
        assert_eq!(p.layers, vec![vec![0], vec![1], vec![2, 3, 4]]);
    }

    #[test]
    fn empty_graph_is_one_layer() {
        let p = partition_layers(&PropagationGraph::new(2));
        assert_eq!(p.layers, vec![vec![0, 1]]);
    }

    #[test]
    fn intralayer_edges_removed_and_skips_kept() {
        // 0 -> 1, 0 -> 2, 1 -> 2 puts 1 and 2 both in layer 1.
        let g = graph(5, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 4, 1.0), (3, 4, 1.0)]);
        let p = partition_layers(&g);
        assert_eq!(p.layer_of, vec![0, 1, 1, 2, 1]);
        let r = remove_intralayer(&g, &p);
        assert!(!r.contains(1, 2));
        assert!(r.contains(0, 2));
        assert_eq!(r.len(), 5);
    }

    #[test]
    fn layer_skipping_edge_kept() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        // 0 -> 2 puts 2 in layer 1 alongside 1.
        let p = partition_layers(&g);
        assert_eq!(p.layer_of, vec![0, 1, 1]);
        let chain = graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]);
        let p = partition_layers(&chain);
        let mut with_skip = chain.clone();
        with_skip.insert(0, 2, 1.0);
        let r = remove_intralayer(&with_skip, &p);
        assert!(r.contains(0, 2));
    }
}

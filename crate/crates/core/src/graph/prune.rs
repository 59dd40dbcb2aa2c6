use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::PropagationGraph;

/// Which edges an indirect path may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PathUniverse {
    /// Every edge currently in the graph, including those at or below θ.
    #[default]
    AllEdges,
    /// Only edges whose value exceeds θ.
    AboveThreshold,
}

/// Whether `dst` is reachable from `src` without using the edge `src -> dst`
/// itself, following only edges accepted by `allowed`.
pub fn has_indirect_path(
    g: &PropagationGraph,
    src: usize,
    dst: usize,
    allowed: impl Fn(usize, usize, f64) -> bool,
) -> bool {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        if (e.src, e.dst) != (src, dst) && allowed(e.src, e.dst, e.ad) {
            adj[e.src].push(e.dst);
        }
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([src]);
    seen[src] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if w == dst {
                return true;
            }
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Greedy removal of edges explained by an indirect route.
///
/// Candidates are the edges with value above `theta`, visited in descending
/// value order (ties by `(src, dst)`). Each candidate is dropped when the
/// graph as it stands at that moment still connects its endpoints some
/// other way.
pub fn prune_indirect(g: &PropagationGraph, theta: f64, universe: PathUniverse) -> PropagationGraph {
    let mut out = g.clone();
    out.set_theta(theta);
    let mut candidates: Vec<_> = g.edges().filter(|e| e.ad > theta).collect();
    candidates.sort_by(|x, y| {
        y.ad.total_cmp(&x.ad)
            .then_with(|| (x.src, x.dst).cmp(&(y.src, y.dst)))
    });
    for e in candidates {
        let indirect = match universe {
            PathUniverse::AllEdges => has_indirect_path(&out, e.src, e.dst, |_, _, _| true),
            PathUniverse::AboveThreshold => {
                has_indirect_path(&out, e.src, e.dst, |_, _, ad| ad > theta)
            }
        };
        if indirect {
            out.remove(e.src, e.dst);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn graph(edges: &[(usize, usize, f64)]) -> PropagationGraph {
        PropagationGraph::from_edges(
            4,
            edges.iter().map(|&(src, dst, ad)| Edge { src, dst, ad }),
        )
    }

    #[test]
    fn removes_transitive_edge() {
        let g = graph(&[(1, 2, 3.0), (2, 3, 3.0), (1, 3, 6.0)]);
        let p = prune_indirect(&g, 5.0, PathUniverse::AllEdges);
        assert_eq!(p.edge_set(), [(1, 2), (2, 3)].into());
    }

    #[test]
    fn keeps_sub_threshold_shortcut() {
        let g = graph(&[(1, 2, 6.0), (2, 3, 6.0), (1, 3, 3.0)]);
        let p = prune_indirect(&g, 5.0, PathUniverse::AllEdges);
        assert_eq!(p.edge_set(), g.edge_set());
    }

    #[test]
    fn restricted_universe_ignores_low_edges() {
        let g = graph(&[(1, 2, 3.0), (2, 3, 3.0), (1, 3, 6.0)]);
        let p = prune_indirect(&g, 5.0, PathUniverse::AboveThreshold);
        assert_eq!(p.edge_set(), g.edge_set());
    }

    #[test]
    fn greedy_order_matters() {
        // 0->1->2->3 plus shortcuts 0->2 (AD 9) and 0->3 (AD 10). Both go.
        let g = graph(&[
            (0, 1, 1.0),
            (1, 2, 1.0),
            (2, 3, 1.0),
            (0, 2, 9.0),
            (0, 3, 10.0),
        ]);
        let p = prune_indirect(&g, 5.0, PathUniverse::AllEdges);
        assert_eq!(p.edge_set(), [(0, 1), (1, 2), (2, 3)].into());
    }
}

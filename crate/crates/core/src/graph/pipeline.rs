use super::{
    compute_ad_matrix, estimate_threshold, orient_edges, partition_layers, prune_indirect,
    remove_intralayer, AdMatrix, KdeConfig, LayerPartition, PathUniverse, PropagationGraph,
    ThresholdEstimate,
};
use crate::alignment::{CostModel, StateSequence};
use crate::error::Result;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EstimateConfig {
    pub kde: KdeConfig,
    /// Use this θ instead of reading one off the density.
    pub theta_override: Option<f64>,
    pub path_universe: PathUniverse,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaSource {
    Kde(ThresholdEstimate),
    Override,
    /// No pair was oriented, so there was nothing to estimate from.
    NoEdges,
}

/// Every intermediate of one estimation run.
#[derive(Debug, Clone)]
pub struct GraphEstimate {
    pub ad: AdMatrix,
    pub theta: f64,
    pub theta_source: ThetaSource,
    pub oriented: PropagationGraph,
    pub pruned: PropagationGraph,
    pub graph: PropagationGraph,
    pub layers: LayerPartition,
}

/// Aligns all pairs, then runs [`estimate_graph_from_matrix`].
pub fn estimate_graph(
    sequences: &[StateSequence],
    model: &CostModel,
    config: &EstimateConfig,
) -> Result<GraphEstimate> {
    let ad = compute_ad_matrix(sequences, model)?;
    estimate_graph_from_matrix(ad, config)
}

/// Orientation, θ, indirect-edge pruning, layering and intra-layer removal
/// over a precomputed antisymmetric delay matrix.
pub fn estimate_graph_from_matrix(ad: AdMatrix, config: &EstimateConfig) -> Result<GraphEstimate> {
    let oriented = orient_edges(&ad);
    let (theta, theta_source) = match config.theta_override {
        Some(t) => (t, ThetaSource::Override),
        None => {
            let values = ad.oriented_magnitudes();
            if values.is_empty() {
                (0.0, ThetaSource::NoEdges)
            } else {
                let est = estimate_threshold(&values, &config.kde)?;
                (est.theta, ThetaSource::Kde(est))
            }
        }
    };
    let pruned = prune_indirect(&oriented, theta, config.path_universe);
    let layers = partition_layers(&pruned);
    let mut graph = remove_intralayer(&pruned, &layers);
    graph.set_theta(theta);
    Ok(GraphEstimate {
        ad,
        theta,
        theta_source,
        oriented,
        pruned,
        graph,
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_pair_gives_empty_graph() {
        let s = StateSequence::new("a", vec![0.0, 1.0, 2.0]).unwrap();
        let t = StateSequence::new("b", vec![0.0, 1.0, 2.0]).unwrap();
        let est = estimate_graph(&[s, t], &CostModel::warping_abs(), &EstimateConfig::default()).unwrap();
        assert!(est.graph.is_empty());
        assert_eq!(est.layers.layers, vec![vec![0, 1]]);
        assert_eq!(est.theta_source, ThetaSource::NoEdges);
    }

    #[test]
    fn override_bypasses_kde() {
        let ad = AdMatrix::from_upper(3, |i, j| (j - i) as f64 * 10.0);
        let cfg = EstimateConfig {
            theta_override: Some(15.0),
            ..Default::default()
        };
        let est = estimate_graph_from_matrix(ad, &cfg).unwrap();
        assert_eq!(est.theta, 15.0);
        // 0->2 (20) is explained by 0->1->2.
        assert_eq!(est.graph.edge_set(), [(0, 1), (1, 2)].into());
        assert_eq!(est.layers.layer_of, vec![0, 1, 2]);
    }
}

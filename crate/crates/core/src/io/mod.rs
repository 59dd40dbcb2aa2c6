//! File formats: datasets, ground-truth sidecars, estimate artifacts and
//! Graphviz export.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write followed by a read returns the same `f64` bit patterns.

mod dataset;
mod dot;
mod outputs;
mod truth;

pub use dataset::{read_dataset, read_dataset_from, write_dataset, write_dataset_to};
pub use dot::{to_dot, LAYER_COLORS};
pub use outputs::{
    read_ad_matrix, read_edges, read_estimate, read_layers, write_ad_matrix, write_estimate,
    write_kde_curve, EstimateSummary, IdEdge, LayersFile, StoredEstimate, ThetaOrigin,
};
pub use truth::{DelayRecord, GroundTruth, TruthEdge, TruthModel};

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Maps each id to its column index, rejecting duplicates.
pub(crate) fn index_ids(ids: &[String]) -> Result<HashMap<&str, usize>> {
    let mut map = HashMap::with_capacity(ids.len());
    for (k, id) in ids.iter().enumerate() {
        if map.insert(id.as_str(), k).is_some() {
            return Err(Error::Format(format!("duplicate individual id `{id}`")));
        }
    }
    Ok(map)
}

pub(crate) fn lookup(map: &HashMap<&str, usize>, id: &str) -> Result<usize> {
    map.get(id)
        .copied()
        .ok_or_else(|| Error::Format(format!("unknown individual id `{id}`")))
}

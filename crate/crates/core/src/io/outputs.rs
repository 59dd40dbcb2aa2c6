use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alignment::AlignMode;
use crate::error::{Error, Result};
use crate::experiment::Method;
use crate::graph::{
    AdMatrix, GraphEstimate, LayerPartition, PathUniverse, PropagationGraph, ThetaSource,
    ThresholdEstimate,
};

use super::{index_ids, lookup, to_dot};

pub const AD_MATRIX_FILE: &str = "ad_matrix.csv";
pub const EDGES_FILE: &str = "edges.json";
pub const LAYERS_FILE: &str = "layers.json";
pub const KDE_FILE: &str = "kde.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const DOT_FILE: &str = "graph.dot";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaOrigin {
    Kde,
    Override,
    NoEdges,
}

impl From<&ThetaSource> for ThetaOrigin {
    fn from(s: &ThetaSource) -> Self {
        match s {
            ThetaSource::Kde(_) => ThetaOrigin::Kde,
            ThetaSource::Override => ThetaOrigin::Override,
            ThetaSource::NoEdges => ThetaOrigin::NoEdges,
        }
    }
}

/// Settings and headline numbers of one `estimate` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub method: Method,
    pub mode: AlignMode,
    pub cost: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_penalty: Option<f64>,
    pub tolerance: f64,
    pub bandwidth: f64,
    pub grid_points: usize,
    pub path_universe: PathUniverse,
    pub theta: f64,
    pub theta_source: ThetaOrigin,
    pub individuals: usize,
    pub length: usize,
    pub edges: usize,
    pub layers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdEdge {
    pub src: String,
    pub dst: String,
    pub ad: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayersFile {
    pub ids: Vec<String>,
    pub layer_of: Vec<usize>,
    /// Member ids of each layer, in layer order.
    pub layers: Vec<Vec<String>>,
}

impl LayersFile {
    pub fn new(ids: &[String], p: &LayerPartition) -> Self {
        Self {
            ids: ids.to_vec(),
            layer_of: p.layer_of.clone(),
            layers: p
                .layers
                .iter()
                .map(|l| l.iter().map(|&v| ids[v].clone()).collect())
                .collect(),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

/// Square CSV with an `id` column and one column per individual;
/// cell `(i, j)` is the delay of `j` from `i`.
pub fn write_ad_matrix(path: impl AsRef<Path>, ids: &[String], ad: &AdMatrix) -> Result<()> {
    let mut w = csv_writer(path.as_ref())?;
    w.write_record(std::iter::once("id").chain(ids.iter().map(String::as_str)))?;
    for (id, row) in ids.iter().zip(ad.rows()) {
        w.write_record(std::iter::once(id.clone()).chain(row.iter().map(f64::to_string)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ad_matrix(path: impl AsRef<Path>) -> Result<(Vec<String>, AdMatrix)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let ids: Vec<String> = header.into_iter().skip(1).collect();
    let n = ids.len();
    let mut values = Vec::with_capacity(n * n);
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.get(0) != ids.get(r).map(String::as_str) {
            return Err(Error::Format(format!("matrix row {} is out of order", r + 1)));
        }
        for field in rec.iter().skip(1) {
            values.push(
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("matrix entry `{field}` is not a number")))?,
            );
        }
    }
    Ok((ids, AdMatrix::from_rows(n, values)?))
}

pub fn write_kde_curve(path: impl AsRef<Path>, kde: &ThresholdEstimate) -> Result<()> {
    let mut w = csv_writer(path.as_ref())?;
    w.write_record(["x", "density"])?;
    for (x, d) in kde.grid.iter().zip(&kde.density) {
        w.write_record([x.to_string(), d.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes every artifact of an estimate into `dir`, creating it if needed.
pub fn write_estimate(
    dir: impl AsRef<Path>,
    ids: &[String],
    est: &GraphEstimate,
    summary: &EstimateSummary,
) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    write_ad_matrix(dir.join(AD_MATRIX_FILE), ids, &est.ad)?;
    let edges: Vec<IdEdge> = est
        .graph
        .edges()
        .map(|e| IdEdge {
            src: ids[e.src].clone(),
            dst: ids[e.dst].clone(),
            ad: e.ad,
        })
        .collect();
    write_json(&dir.join(EDGES_FILE), &edges)?;
    write_json(&dir.join(LAYERS_FILE), &LayersFile::new(ids, &est.layers))?;
    if let ThetaSource::Kde(kde) = &est.theta_source {
        write_kde_curve(dir.join(KDE_FILE), kde)?;
    }
    write_json(&dir.join(SUMMARY_FILE), summary)?;
    let mut w = create(&dir.join(DOT_FILE))?;
    w.write_all(to_dot(ids, &est.graph, &est.layers).as_bytes())?;
    w.flush()?;
    Ok(())
}

pub fn read_edges(path: impl AsRef<Path>, ids: &[String]) -> Result<PropagationGraph> {
    let edges: Vec<IdEdge> = read_json(path.as_ref())?;
    let map = index_ids(ids)?;
    let mut g = PropagationGraph::new(ids.len());
    for e in edges {
        let (s, d) = (lookup(&map, &e.src)?, lookup(&map, &e.dst)?);
        if s == d {
            return Err(Error::Format(format!("self-loop on `{}`", e.src)));
        }
        g.insert(s, d, e.ad);
    }
    Ok(g)
}

pub fn read_layers(path: impl AsRef<Path>) -> Result<LayersFile> {
    let f: LayersFile = read_json(path.as_ref())?;
    if f.layer_of.len() != f.ids.len() {
        return Err(Error::Format(format!(
            "{} ids but {} layer indices",
            f.ids.len(),
            f.layer_of.len()
        )));
    }
    Ok(f)
}

/// An estimate read back from its output directory.
#[derive(Debug, Clone)]
pub struct StoredEstimate {
    pub ids: Vec<String>,
    pub summary: EstimateSummary,
    pub ad: AdMatrix,
    pub graph: PropagationGraph,
    pub layers: LayerPartition,
}

pub fn read_estimate(dir: impl AsRef<Path>) -> Result<StoredEstimate> {
    let dir = dir.as_ref();
    let summary: EstimateSummary = read_json(&dir.join(SUMMARY_FILE))?;
    let (ids, ad) = read_ad_matrix(dir.join(AD_MATRIX_FILE))?;
    let layers = read_layers(dir.join(LAYERS_FILE))?;
    if layers.ids != ids {
        return Err(Error::Format(
            "layer file and matrix list different individuals".into(),
        ));
    }
    let mut graph = read_edges(dir.join(EDGES_FILE), &ids)?;
    graph.set_theta(summary.theta);
    Ok(StoredEstimate {
        summary,
        layers: LayerPartition::from_layer_of(layers.layer_of),
        ad,
        graph,
        ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        let ids: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let ad = AdMatrix::from_upper(3, |i, j| (i + 2 * j) as f64 / 7.0);
        write_ad_matrix(&p, &ids, &ad).unwrap();
        let (ids2, ad2) = read_ad_matrix(&p).unwrap();
        assert_eq!(ids, ids2);
        assert_eq!(ad, ad2);
    }

    #[test]
    fn layers_file_lists_ids() {
        let ids: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let f = LayersFile::new(&ids, &LayerPartition::from_layer_of(vec![1, 0, 1]));
        assert_eq!(f.layers, vec![vec!["b".to_string()], vec!["a".into(), "c".into()]]);
    }
}

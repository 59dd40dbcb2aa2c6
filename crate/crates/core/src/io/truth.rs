use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PropagationGraph;
use crate::synth::{BinaryBenchmark, BinaryParams, DelayTrace, RealValuedBenchmark, REAL_MAX_DELAY};

use super::{index_ids, lookup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TruthModel {
    /// Delayed averages of in-neighbours over a fixed DAG.
    Real,
    /// Pulses spreading between nearby individuals on a plane.
    Binary,
}

impl std::fmt::Display for TruthModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TruthModel::Real => "real",
            TruthModel::Binary => "binary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthEdge {
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelayRecord {
    pub src: String,
    pub dst: String,
    /// Time step of `trace[0]`, 1-based.
    pub first_t: usize,
    pub trace: Vec<u32>,
}

/// Ground-truth sidecar written next to a generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub model: TruthModel,
    pub seed: u64,
    pub ids: Vec<String>,
    pub length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BinaryParams>,
    pub edges: Vec<TruthEdge>,
    /// Largest delay the model can produce; MAEATD sums start here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_delay: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delays: Vec<DelayRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub locations: Vec<[f64; 2]>,
}

fn named_edges(ids: &[String], edges: &[(usize, usize)]) -> Vec<TruthEdge> {
    edges
        .iter()
        .map(|&(s, d)| TruthEdge {
            src: ids[s].clone(),
            dst: ids[d].clone(),
        })
        .collect()
}

impl GroundTruth {
    pub fn from_real(bench: &RealValuedBenchmark) -> Self {
        let ids: Vec<String> = bench.sequences.iter().map(|s| s.id().to_owned()).collect();
        let delays = bench
            .true_delays
            .iter()
            .map(|(&(s, d), tr)| DelayRecord {
                src: ids[s].clone(),
                dst: ids[d].clone(),
                first_t: tr.first_t,
                trace: tr.values.clone(),
            })
            .collect();
        Self {
            model: TruthModel::Real,
            seed: bench.seed,
            length: bench.sequences.first().map_or(0, |s| s.len()),
            params: None,
            edges: named_edges(&ids, &bench.true_edges),
            max_delay: Some(REAL_MAX_DELAY),
            delays,
            locations: Vec::new(),
            ids,
        }
    }

    pub fn from_binary(bench: &BinaryBenchmark) -> Self {
        let ids: Vec<String> = bench.sequences.iter().map(|s| s.id().to_owned()).collect();
        Self {
            model: TruthModel::Binary,
            seed: bench.seed,
            length: bench.params.length,
            params: Some(bench.params),
            edges: named_edges(&ids, &bench.true_edges()),
            max_delay: None,
            delays: Vec::new(),
            locations: bench.locations.clone(),
            ids,
        }
    }

    /// The true graph over the vertex order of `ids`, which must be a
    /// permutation of the sidecar's ids.
    pub fn graph(&self, ids: &[String]) -> Result<PropagationGraph> {
        self.check_ids(ids)?;
        let map = index_ids(ids)?;
        let mut g = PropagationGraph::new(ids.len());
        for e in &self.edges {
            let (s, d) = (lookup(&map, &e.src)?, lookup(&map, &e.dst)?);
            if s == d {
                return Err(Error::Format(format!("self-loop on `{}`", e.src)));
            }
            g.insert(s, d, 1.0);
        }
        Ok(g)
    }

    pub fn delay_traces(&self, ids: &[String]) -> Result<BTreeMap<(usize, usize), DelayTrace>> {
        let map = index_ids(ids)?;
        self.delays
            .iter()
            .map(|r| {
                let key = (lookup(&map, &r.src)?, lookup(&map, &r.dst)?);
                let trace = DelayTrace {
                    first_t: r.first_t,
                    values: r.trace.clone(),
                };
                Ok((key, trace))
            })
            .collect()
    }

    fn check_ids(&self, ids: &[String]) -> Result<()> {
        let mut a: Vec<&String> = self.ids.iter().collect();
        let mut b: Vec<&String> = ids.iter().collect();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::CoverMismatch {
                left: self.ids.len(),
                right: ids.len(),
            });
        }
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}

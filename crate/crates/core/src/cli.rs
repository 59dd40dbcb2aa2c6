//! `propgraph` command line.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::alignment::{
    align_stats, optimal_alignment, render_alignment, AbsDiff, AbsDiffWithGap, AlignMode,
    BinaryPulse, CostModel, SquaredDiff, StateSequence, DEFAULT_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::experiment::{
    batch_binary, batch_real, evaluate_parts, run_method, BenchRow, Method, BINARY_ALPHA,
};
use crate::graph::{EstimateConfig, KdeConfig, PathUniverse};
use crate::io::{
    read_dataset, read_estimate, write_dataset, write_estimate, EstimateSummary, GroundTruth,
    ThetaOrigin, TruthModel,
};
use crate::metrics::{EvalReport, MeanCi};
use crate::oracle;
use crate::preprocess::{central_derivative, group_average, standardize};
use crate::synth::{gen_binary, gen_real_valued, BinaryParams};

pub const DATASET_FILE: &str = "dataset.csv";
pub const TRUTH_FILE: &str = "truth.json";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Parser)]
#[command(name = "propgraph", version, about = "Estimate state-propagation graphs from time series")]
pub struct Cli {
    /// Worker threads for pairwise alignment (default: all cores).
    #[arg(long, global = true, env = "PROPGRAPH_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset and its ground truth.
    Generate(GenerateArgs),
    /// Estimate a propagation graph from a dataset CSV.
    Estimate(EstimateArgs),
    /// Score an estimate against a ground-truth sidecar.
    Evaluate(EvaluateArgs),
    /// Align two individuals and report the delay average.
    Align(AlignArgs),
    /// Run both methods over many synthetic datasets.
    Bench(BenchArgs),
    /// Standardize, group-average and differentiate series.
    Preprocess(PreprocessArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: TruthModel,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Propagation probability (binary model).
    #[arg(long, default_value_t = 0.95)]
    pub p: f64,
    /// Arena side length M (binary model).
    #[arg(long, default_value_t = 100.0)]
    pub arena: f64,
    /// Output directory for dataset.csv and truth.json.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostKind {
    /// |x - y|
    Abs,
    /// (x - y)^2
    Squared,
    /// 0/1 pulses: mismatch alpha, 0 vs gap 1, 1 vs gap forbidden.
    Binary,
}

#[derive(Debug, Clone, Args)]
pub struct CostArgs {
    #[arg(long, value_enum, default_value_t = AlignMode::Warping)]
    pub mode: AlignMode,
    /// Pair cost; defaults to abs for warping and binary for gap mode.
    #[arg(long, value_enum)]
    pub cost: Option<CostKind>,
    /// Mismatch cost of the binary pulse cost.
    #[arg(long, default_value_t = BINARY_ALPHA)]
    pub alpha: f64,
    /// Gap penalty for abs cost in gap mode.
    #[arg(long, default_value_t = 1.0)]
    pub gap_penalty: f64,
    /// Absolute tolerance for treating path costs as tied.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
}

impl CostArgs {
    fn kind(&self) -> CostKind {
        self.cost.unwrap_or(match self.mode {
            AlignMode::Warping => CostKind::Abs,
            AlignMode::Gap => CostKind::Binary,
        })
    }

    pub fn model(&self) -> Result<CostModel> {
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be a finite non-negative number, got {}",
                self.tolerance
            )));
        }
        let m = match (self.mode, self.kind()) {
            (_, CostKind::Binary) => {
                if !(self.alpha >= 2.0 && self.alpha.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha must be at least 2, got {}",
                        self.alpha
                    )));
                }
                CostModel::new(self.mode, BinaryPulse::new(self.alpha))
            }
            (AlignMode::Gap, CostKind::Abs) => CostModel::new(
                AlignMode::Gap,
                AbsDiffWithGap {
                    gap_penalty: self.gap_penalty,
                },
            ),
            (AlignMode::Gap, CostKind::Squared) => {
                return Err(Error::InvalidParameter(
                    "squared cost has no gap penalty; use abs or binary in gap mode".into(),
                ))
            }
            (AlignMode::Warping, CostKind::Abs) => CostModel::new(AlignMode::Warping, AbsDiff),
            (AlignMode::Warping, CostKind::Squared) => CostModel::new(AlignMode::Warping, SquaredDiff),
        };
        Ok(m.with_tolerance(self.tolerance))
    }

    fn describe(&self) -> (String, Option<f64>, Option<f64>) {
        match (self.mode, self.kind()) {
            (_, CostKind::Binary) => ("binary".into(), Some(self.alpha), None),
            (AlignMode::Gap, CostKind::Abs) => ("abs".into(), None, Some(self.gap_penalty)),
            (_, CostKind::Abs) => ("abs".into(), None, None),
            (_, CostKind::Squared) => ("squared".into(), None, None),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    /// Gaussian kernel bandwidth for the threshold density.
    #[arg(long, default_value_t = 3.0)]
    pub bandwidth: f64,
    #[arg(long, default_value_t = 512)]
    pub grid_points: usize,
    /// Fixed threshold instead of the density valley.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Edges an indirect path may use when pruning.
    #[arg(long, value_enum, default_value_t = PathUniverse::AllEdges)]
    pub path_universe: PathUniverse,
}

impl ThresholdArgs {
    pub fn config(&self) -> Result<EstimateConfig> {
        if let Some(t) = self.theta {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!("theta must be ≥ 0, got {t}")));
            }
        }
        Ok(EstimateConfig {
            kde: KdeConfig {
                bandwidth: self.bandwidth,
                grid_points: self.grid_points,
            },
            theta_override: self.theta,
            path_universe: self.path_universe,
        })
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Dataset CSV (header of ids, one row per time step).
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Proposed)]
    pub method: Method,
    #[command(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Directory written by `estimate`.
    pub estimate: PathBuf,
    /// Ground-truth sidecar written by `generate`.
    pub truth: PathBuf,
    /// Where to write report.json; defaults to the estimate directory.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    pub dataset: PathBuf,
    /// First individual, by id or 1-based column index.
    pub i: String,
    /// Second individual, by id or 1-based column index.
    pub j: String,
    #[command(flatten)]
    pub cost: CostArgs,
    /// Print one minimum-cost alignment column by column.
    #[arg(long)]
    pub table: bool,
    /// Also enumerate every alignment by brute force (short series only).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub model: TruthModel,
    /// Propagation probabilities (binary model).
    #[arg(long, value_delimiter = ',', default_value = "1.0,0.95,0.9,0.8,0.7,0.6,0.5")]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 100.0)]
    pub arena: f64,
    /// Datasets per setting.
    #[arg(long, default_value_t = 100)]
    pub datasets: u64,
    /// Seed of the first dataset; the rest follow consecutively.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
    /// Directory for bench.json and bench.txt.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Input dataset CSV.
    pub input: PathBuf,
    /// Standardize every input column first.
    #[arg(long)]
    pub standardize: bool,
    /// CSV with columns `id,group`; members are averaged per group and the
    /// result standardized.
    #[arg(long)]
    pub groups: Option<PathBuf>,
    /// Replace each series by its centred derivative estimate (drops both ends).
    #[arg(long)]
    pub derivative: bool,
    /// Output dataset CSV.
    #[arg(long, short)]
    pub out: PathBuf,
}

/// Parses arguments and runs the command, returning the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParameter("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Estimate(a) => cmd_estimate(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Align(a) => cmd_align(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::Preprocess(a) => cmd_preprocess(&a),
    })
}

fn ids_of(seqs: &[StateSequence]) -> Vec<String> {
    seqs.iter().map(|s| s.id().to_owned()).collect()
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    std::fs::create_dir_all(&a.out)?;
    let (seqs, truth) = match a.model {
        TruthModel::Real => {
            let b = gen_real_valued(a.seed);
            let t = GroundTruth::from_real(&b);
            (b.sequences, t)
        }
        TruthModel::Binary => {
            let params = BinaryParams {
                p: a.p,
                arena: a.arena,
                ..BinaryParams::default()
            };
            let b = gen_binary(&params, a.seed)?;
            let t = GroundTruth::from_binary(&b);
            (b.sequences, t)
        }
    };
    write_dataset(a.out.join(DATASET_FILE), &seqs)?;
    truth.write(a.out.join(TRUTH_FILE))?;
    println!(
        "{} dataset: {} individuals x {} steps, {} true edges -> {}",
        a.model,
        seqs.len(),
        truth.length,
        truth.edges.len(),
        a.out.display()
    );
    Ok(())
}

pub fn cmd_estimate(a: &EstimateArgs) -> Result<()> {
    let seqs = read_dataset(&a.dataset)?;
    let model = a.cost.model()?;
    let config = a.threshold.config()?;
    let est = run_method(a.method, &seqs, &model, &config)?;
    let (cost, alpha, gap_penalty) = a.cost.describe();
    let summary = EstimateSummary {
        method: a.method,
        mode: model.mode,
        cost,
        alpha,
        gap_penalty,
        tolerance: model.tolerance,
        bandwidth: config.kde.bandwidth,
        grid_points: config.kde.grid_points,
        path_universe: config.path_universe,
        theta: est.theta,
        theta_source: ThetaOrigin::from(&est.theta_source),
        individuals: seqs.len(),
        length: seqs[0].len(),
        edges: est.graph.len(),
        layers: est.layers.layers.len(),
    };
    write_estimate(&a.out, &ids_of(&seqs), &est, &summary)?;
    println!(
        "theta = {} ({:?}); {} oriented, {} after pruning, {} edges in {} layers -> {}",
        est.theta,
        summary.theta_source,
        est.oriented.len(),
        est.pruned.len(),
        est.graph.len(),
        summary.layers,
        a.out.display()
    );
    Ok(())
}

fn write_report(path: &Path, report: &EvalReport) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, report)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn format_report(r: &EvalReport) -> String {
    let mut s = String::new();
    if let Some(m) = r.maeatd {
        s.push_str(&format!("MAEATD    {m:.4}\n"));
    }
    s.push_str(&format!(
        "Prec      {:.4}{}\nRec       {:.4}\nFM        {:.4}\nLA        {:.4}\nMLD       {:.4}\n",
        r.precision,
        if r.empty_estimate { " (empty estimate)" } else { "" },
        r.recall,
        r.f_measure,
        r.layer_accuracy,
        r.mean_layer_difference
    ));
    s
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<()> {
    let est = read_estimate(&a.estimate)?;
    let truth = GroundTruth::read(&a.truth)?;
    let g = truth.graph(&est.ids)?;
    let traces = truth.delay_traces(&est.ids)?;
    let delays = match (truth.max_delay, traces.is_empty()) {
        (Some(m), false) => Some((&traces, est.summary.length, m)),
        _ => None,
    };
    let report = evaluate_parts(est.summary.method, &g, &est.ad, &est.graph, &est.layers, delays)?;
    let out = a.out.clone().unwrap_or_else(|| a.estimate.clone());
    std::fs::create_dir_all(&out)?;
    write_report(&out.join(REPORT_FILE), &report)?;
    print!("{}", format_report(&report));
    Ok(())
}

/// Resolves an individual by exact id, falling back to a 1-based index.
fn pick<'a>(seqs: &'a [StateSequence], key: &str) -> Result<&'a StateSequence> {
    if let Some(s) = seqs.iter().find(|s| s.id() == key) {
        return Ok(s);
    }
    match key.parse::<usize>() {
        Ok(k) if (1..=seqs.len()).contains(&k) => Ok(&seqs[k - 1]),
        _ => Err(Error::Format(format!("no individual `{key}`"))),
    }
}

pub fn cmd_align(a: &AlignArgs) -> Result<()> {
    let seqs = read_dataset(&a.dataset)?;
    let (x, y) = (pick(&seqs, &a.i)?, pick(&seqs, &a.j)?);
    let model = a.cost.model()?;
    let st = align_stats(x, y, &model)?;
    println!("pair            {} -> {}", x.id(), y.id());
    println!("min cost        {}", st.min_cost);
    println!("alignments      {}", st.num_alignments);
    println!("delay sum total {}", st.delay_sum_total);
    println!("average delay   {}", st.avg_delay);
    if a.oracle {
        let o = oracle::summarize(x, y, &model, oracle::DEFAULT_CAP)?;
        let hist: Vec<String> = o
            .delay_histogram
            .iter()
            .map(|(d, c)| format!("{d}x{c}"))
            .collect();
        println!("enumerated      {} alignments, delay sums {}", o.count, hist.join(" "));
    }
    if a.table {
        match optimal_alignment(x, y, &model)? {
            Some(cols) => print!("\n{}", render_alignment(x, y, &cols)),
            None => println!("\nno finite-cost alignment"),
        }
    }
    Ok(())
}

fn fmt_ci(c: &MeanCi) -> String {
    format!("{:.3} (±{:.3})", c.mean, c.half_width)
}

pub fn format_bench(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:<7} {:<6} {:<9} {:<16} {:<16} {:<16} {:<16} {:<16} {:<16}\n",
        "model", "p", "method", "MAEATD", "Prec", "Rec", "FM", "LA", "MLD"
    );
    for r in rows {
        let p = r.p.map_or("-".to_string(), |p| format!("{p:.2}"));
        let mae = r.maeatd.as_ref().map_or("-".to_string(), fmt_ci);
        s.push_str(&format!(
            "{:<7} {:<6} {:<9} {:<16} {:<16} {:<16} {:<16} {:<16} {:<16}\n",
            r.model,
            p,
            r.method.to_string(),
            mae,
            fmt_ci(&r.precision),
            fmt_ci(&r.recall),
            fmt_ci(&r.f_measure),
            fmt_ci(&r.layer_accuracy),
            fmt_ci(&r.mean_layer_difference)
        ));
    }
    s
}

pub fn cmd_bench(a: &BenchArgs) -> Result<()> {
    if a.datasets == 0 {
        return Err(Error::InvalidParameter("--datasets must be at least 1".into()));
    }
    let config = a.threshold.config()?;
    let seeds: Vec<u64> = (a.seed..a.seed + a.datasets).collect();
    let mut rows = Vec::new();
    let methods = [Method::Baseline, Method::Proposed];
    match a.model {
        TruthModel::Real => {
            for m in methods {
                let reports = batch_real(&seeds, m, &config)?;
                rows.push(BenchRow::aggregate("real", None, m, &reports));
            }
        }
        TruthModel::Binary => {
            for &p in &a.p {
                let params = BinaryParams {
                    p,
                    arena: a.arena,
                    ..BinaryParams::default()
                };
                for m in methods {
                    let reports = batch_binary(&params, &seeds, m, &config)?;
                    rows.push(BenchRow::aggregate("binary", Some(p), m, &reports));
                }
            }
        }
    }
    let table = format_bench(&rows);
    print!("{table}");
    if let Some(out) = &a.out {
        std::fs::create_dir_all(out)?;
        let mut w = BufWriter::new(File::create(out.join("bench.json"))?);
        serde_json::to_writer_pretty(&mut w, &rows)?;
        w.write_all(b"\n")?;
        w.flush()?;
        std::fs::write(out.join("bench.txt"), table)?;
    }
    Ok(())
}

/// Reads `id,group` rows into groups of column indices, in order of first
/// appearance, together with the group names.
fn read_groups(path: &Path, ids: &[String]) -> Result<(Vec<String>, Vec<Vec<usize>>)> {
    let col: HashMap<&str, usize> = ids.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut names: Vec<String> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let (Some(id), Some(group)) = (rec.get(0), rec.get(1)) else {
            return Err(Error::Format("group rows need `id,group`".into()));
        };
        let k = *col
            .get(id)
            .ok_or_else(|| Error::Format(format!("group file names unknown id `{id}`")))?;
        let g = match names.iter().position(|n| n == group) {
            Some(g) => g,
            None => {
                names.push(group.to_owned());
                members.push(Vec::new());
                names.len() - 1
            }
        };
        members[g].push(k);
    }
    if names.is_empty() {
        return Err(Error::EmptyInput("group file has no rows"));
    }
    Ok((names, members))
}

pub fn cmd_preprocess(a: &PreprocessArgs) -> Result<()> {
    let seqs = read_dataset(&a.input)?;
    let mut ids = ids_of(&seqs);
    let mut series: Vec<Vec<f64>> = seqs.iter().map(|s| s.values().to_vec()).collect();
    if a.standardize {
        series = series.iter().map(|s| standardize(s)).collect::<Result<_>>()?;
    }
    if let Some(path) = &a.groups {
        let (names, groups) = read_groups(path, &ids)?;
        series = group_average(&series, &groups)?;
        ids = names;
    }
    if a.derivative {
        series = series
            .iter()
            .map(|s| central_derivative(s))
            .collect::<Result<_>>()?;
    }
    let out: Vec<StateSequence> = ids
        .into_iter()
        .zip(series)
        .map(|(id, v)| StateSequence::new(id, v))
        .collect::<Result<_>>()?;
    write_dataset(&a.out, &out)?;
    println!(
        "{} series x {} steps -> {}",
        out.len(),
        out.first().map_or(0, StateSequence::len),
        a.out.display()
    );
    Ok(())
}

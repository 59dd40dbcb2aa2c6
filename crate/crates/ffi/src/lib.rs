//! C ABI for the propgraph estimator.
//!
//! Every fallible call returns a [`PgStatus`]. On failure the message is
//! kept per thread and read with [`pg_last_error_message`]. Objects are
//! opaque handles created by `pg_*_new`/`pg_*_read`/`pg_estimate`/`pg_align`
//! and released with the matching `pg_*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use propgraph::alignment::{
    align_stats, AbsDiff, AbsDiffWithGap, AlignMode, AlignmentStats, BinaryPulse, CostModel,
    SquaredDiff, StateSequence, DEFAULT_TOLERANCE,
};
use propgraph::experiment::{run_method, Method};
use propgraph::graph::{EstimateConfig, GraphEstimate, KdeConfig, PathUniverse};
use propgraph::io::{read_dataset, to_dot, write_dataset};
use propgraph::Error;

/// Result of a call. Values above `PG_STATUS_OK` mirror the CLI exit-code
/// classes where one applies.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed input: bad file contents, non-finite states, bad parameters.
    InvalidInput = 2,
    /// Well-formed but unusable input, e.g. fewer than two individuals.
    Degenerate = 3,
    Io = 4,
    OutOfRange = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgAlignMode {
    Warping = 0,
    Gap = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgCost {
    Abs = 0,
    Squared = 1,
    /// 0/1 pulses: mismatch `alpha`, 0 vs gap 1, 1 vs gap forbidden.
    Binary = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgMethod {
    Proposed = 0,
    Baseline = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PgAlignConfig {
    pub mode: PgAlignMode,
    pub cost: PgCost,
    pub alpha: f64,
    /// Used by `PG_COST_ABS` in gap mode.
    pub gap_penalty: f64,
    pub tolerance: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PgEstimateConfig {
    pub bandwidth: f64,
    pub grid_points: usize,
    /// Fixed threshold; NaN reads it off the density.
    pub theta: f64,
    /// Restrict indirect paths to edges above the threshold.
    pub above_threshold_paths: bool,
}

/// Edge of an estimated graph, 0-based vertex indices.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PgEdge {
    pub src: usize,
    pub dst: usize,
    pub ad: f64,
}

/// Named state sequences of equal length.
pub struct PgDataset {
    seqs: Vec<StateSequence>,
}

pub struct PgAlignment {
    stats: AlignmentStats,
}

pub struct PgEstimate {
    ids: Vec<String>,
    est: GraphEstimate,
    edges: Vec<PgEdge>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> PgStatus {
    match err.exit_code() {
        2 => PgStatus::InvalidInput,
        3 => PgStatus::Degenerate,
        _ => PgStatus::Io,
    }
}

fn fail(err: Error) -> PgStatus {
    set_error(err.to_string());
    status_of(&err)
}

/// Runs `f`, turning panics into `PG_STATUS_INTERNAL`.
fn guard(f: impl FnOnce() -> PgStatus) -> PgStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            PgStatus::Internal
        }
    }
}

fn null(what: &str) -> PgStatus {
    set_error(format!("{what} is NULL"));
    PgStatus::NullPointer
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, PgStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        PgStatus::InvalidInput
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next `pg_*` call on the same thread.
#[no_mangle]
pub extern "C" fn pg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from a `pg_*` function returning an owned string, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn pg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn pg_align_config_default() -> PgAlignConfig {
    PgAlignConfig {
        mode: PgAlignMode::Warping,
        cost: PgCost::Abs,
        alpha: 3.0,
        gap_penalty: 1.0,
        tolerance: DEFAULT_TOLERANCE,
    }
}

#[no_mangle]
pub extern "C" fn pg_estimate_config_default() -> PgEstimateConfig {
    PgEstimateConfig {
        bandwidth: 3.0,
        grid_points: 512,
        theta: f64::NAN,
        above_threshold_paths: false,
    }
}

fn cost_model(c: &PgAlignConfig) -> Result<CostModel, Error> {
    if !(c.tolerance >= 0.0 && c.tolerance.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance {}", c.tolerance)));
    }
    let m = match (c.mode, c.cost) {
        (PgAlignMode::Warping, PgCost::Abs) => CostModel::new(AlignMode::Warping, AbsDiff),
        (PgAlignMode::Warping, PgCost::Squared) => CostModel::new(AlignMode::Warping, SquaredDiff),
        (mode, PgCost::Binary) => {
            if !(c.alpha >= 2.0 && c.alpha.is_finite()) {
                return Err(Error::InvalidParameter(format!("alpha must be ≥ 2, got {}", c.alpha)));
            }
            let mode = match mode {
                PgAlignMode::Warping => AlignMode::Warping,
                PgAlignMode::Gap => AlignMode::Gap,
            };
            CostModel::new(mode, BinaryPulse::new(c.alpha))
        }
        (PgAlignMode::Gap, PgCost::Abs) => CostModel::new(
            AlignMode::Gap,
            AbsDiffWithGap {
                gap_penalty: c.gap_penalty,
            },
        ),
        (PgAlignMode::Gap, PgCost::Squared) => {
            return Err(Error::InvalidParameter("squared cost has no gap penalty".into()))
        }
    };
    Ok(m.with_tolerance(c.tolerance))
}

fn estimate_config(c: &PgEstimateConfig) -> EstimateConfig {
    EstimateConfig {
        kde: KdeConfig {
            bandwidth: c.bandwidth,
            grid_points: c.grid_points,
        },
        theta_override: (!c.theta.is_nan()).then_some(c.theta),
        path_universe: if c.above_threshold_paths {
            PathUniverse::AboveThreshold
        } else {
            PathUniverse::AllEdges
        },
    }
}

// ---- datasets ----

#[no_mangle]
pub extern "C" fn pg_dataset_new() -> *mut PgDataset {
    Box::into_raw(Box::new(PgDataset { seqs: Vec::new() }))
}

/// Appends a copy of `values[0..len]` under `id`. All sequences of one
/// dataset must have the same length.
///
/// # Safety
/// `ds` must be a live dataset handle, `id` a NUL-terminated string and
/// `values` readable for `len` doubles (may be NULL when `len == 0`).
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_push(
    ds: *mut PgDataset,
    id: *const c_char,
    values: *const f64,
    len: usize,
) -> PgStatus {
    guard(|| {
        let Some(ds) = ds.as_mut() else {
            return null("dataset");
        };
        let id = match str_arg(id, "id") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if values.is_null() && len > 0 {
            return null("values");
        }
        let v = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(values, len).to_vec()
        };
        if let Some(first) = ds.seqs.first() {
            if first.len() != len {
                return fail(Error::LengthMismatch {
                    id: id.to_owned(),
                    expected: first.len(),
                    found: len,
                });
            }
        }
        if ds.seqs.iter().any(|s| s.id() == id) {
            return fail(Error::Format(format!("duplicate individual id `{id}`")));
        }
        match StateSequence::new(id, v) {
            Ok(s) => {
                ds.seqs.push(s);
                PgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_read_csv(
    path: *const c_char,
    out: *mut *mut PgDataset,
) -> PgStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        *out = ptr::null_mut();
        let path = match str_arg(path, "path") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match read_dataset(path) {
            Ok(seqs) => {
                *out = Box::into_raw(Box::new(PgDataset { seqs }));
                PgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `ds` must be a live dataset handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_write_csv(ds: *const PgDataset, path: *const c_char) -> PgStatus {
    guard(|| {
        let Some(ds) = ds.as_ref() else {
            return null("dataset");
        };
        let path = match str_arg(path, "path") {
            Ok(s) => s,
            Err(s) => return s,
        };
        write_dataset(path, &ds.seqs).map_or_else(fail, |_| PgStatus::Ok)
    })
}

/// Number of individuals, 0 for NULL.
///
/// # Safety
/// `ds` must be a live dataset handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_len(ds: *const PgDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.seqs.len())
}

/// Series length, 0 for NULL or an empty dataset.
///
/// # Safety
/// `ds` must be a live dataset handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_series_len(ds: *const PgDataset) -> usize {
    ds.as_ref()
        .and_then(|d| d.seqs.first())
        .map_or(0, StateSequence::len)
}

/// # Safety
/// `ds` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_dataset_free(ds: *mut PgDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

// ---- pairwise alignment ----

/// Aligns individuals `i` and `j` (0-based).
///
/// # Safety
/// `ds` must be a live dataset handle, `config` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_align(
    ds: *const PgDataset,
    i: usize,
    j: usize,
    config: *const PgAlignConfig,
    out: *mut *mut PgAlignment,
) -> PgStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        *out = ptr::null_mut();
        let Some(ds) = ds.as_ref() else {
            return null("dataset");
        };
        let Some(cfg) = config.as_ref() else {
            return null("config");
        };
        let (Some(a), Some(b)) = (ds.seqs.get(i), ds.seqs.get(j)) else {
            set_error(format!("individual index out of range (dataset has {})", ds.seqs.len()));
            return PgStatus::OutOfRange;
        };
        let stats = match cost_model(cfg).and_then(|m| align_stats(a, b, &m)) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        *out = Box::into_raw(Box::new(PgAlignment { stats }));
        PgStatus::Ok
    })
}

/// # Safety
/// `al` must be a live alignment handle.
#[no_mangle]
pub unsafe extern "C" fn pg_alignment_min_cost(al: *const PgAlignment) -> f64 {
    al.as_ref().map_or(f64::NAN, |a| a.stats.min_cost)
}

/// # Safety
/// `al` must be a live alignment handle.
#[no_mangle]
pub unsafe extern "C" fn pg_alignment_avg_delay(al: *const PgAlignment) -> f64 {
    al.as_ref().map_or(f64::NAN, |a| a.stats.avg_delay)
}

/// Exact number of minimum-cost alignments in decimal. Free with
/// `pg_string_free`.
///
/// # Safety
/// `al` must be a live alignment handle.
#[no_mangle]
pub unsafe extern "C" fn pg_alignment_count(al: *const PgAlignment) -> *mut c_char {
    al.as_ref()
        .map_or(ptr::null_mut(), |a| into_c_string(a.stats.num_alignments.to_string()))
}

/// Exact delay sum over all minimum-cost alignments in decimal. Free with
/// `pg_string_free`.
///
/// # Safety
/// `al` must be a live alignment handle.
#[no_mangle]
pub unsafe extern "C" fn pg_alignment_delay_sum(al: *const PgAlignment) -> *mut c_char {
    al.as_ref()
        .map_or(ptr::null_mut(), |a| into_c_string(a.stats.delay_sum_total.to_string()))
}

/// # Safety
/// `al` must come from `pg_align` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_alignment_free(al: *mut PgAlignment) {
    if !al.is_null() {
        drop(Box::from_raw(al));
    }
}

// ---- graph estimation ----

/// # Safety
/// `ds` must be a live dataset handle, both configs readable and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate(
    ds: *const PgDataset,
    method: PgMethod,
    align: *const PgAlignConfig,
    config: *const PgEstimateConfig,
    out: *mut *mut PgEstimate,
) -> PgStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        *out = ptr::null_mut();
        let Some(ds) = ds.as_ref() else {
            return null("dataset");
        };
        let (Some(al), Some(cfg)) = (align.as_ref(), config.as_ref()) else {
            return null("config");
        };
        let method = match method {
            PgMethod::Proposed => Method::Proposed,
            PgMethod::Baseline => Method::Baseline,
        };
        let est = match cost_model(al).and_then(|m| run_method(method, &ds.seqs, &m, &estimate_config(cfg))) {
            Ok(e) => e,
            Err(e) => return fail(e),
        };
        let edges = est
            .graph
            .edges()
            .map(|e| PgEdge {
                src: e.src,
                dst: e.dst,
                ad: e.ad,
            })
            .collect();
        let ids = ds.seqs.iter().map(|s| s.id().to_owned()).collect();
        *out = Box::into_raw(Box::new(PgEstimate { ids, est, edges }));
        PgStatus::Ok
    })
}

/// # Safety
/// `est` must be a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_theta(est: *const PgEstimate) -> f64 {
    est.as_ref().map_or(f64::NAN, |e| e.est.theta)
}

/// # Safety
/// `est` must be a live estimate handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_num_vertices(est: *const PgEstimate) -> usize {
    est.as_ref().map_or(0, |e| e.ids.len())
}

/// # Safety
/// `est` must be a live estimate handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_num_edges(est: *const PgEstimate) -> usize {
    est.as_ref().map_or(0, |e| e.edges.len())
}

/// Edges ordered by `(src, dst)`.
///
/// # Safety
/// `est` must be a live estimate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_edge(est: *const PgEstimate, k: usize, out: *mut PgEdge) -> PgStatus {
    guard(|| {
        let (Some(e), false) = (est.as_ref(), out.is_null()) else {
            return null("estimate or out");
        };
        match e.edges.get(k) {
            Some(edge) => {
                *out = *edge;
                PgStatus::Ok
            }
            None => {
                set_error(format!("edge {k} out of range ({} edges)", e.edges.len()));
                PgStatus::OutOfRange
            }
        }
    })
}

/// # Safety
/// `est` must be a live estimate handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_num_layers(est: *const PgEstimate) -> usize {
    est.as_ref().map_or(0, |e| e.est.layers.layers.len())
}

/// # Safety
/// `est` must be a live estimate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_layer_of(est: *const PgEstimate, v: usize, out: *mut usize) -> PgStatus {
    guard(|| {
        let (Some(e), false) = (est.as_ref(), out.is_null()) else {
            return null("estimate or out");
        };
        match e.est.layers.layer_of.get(v) {
            Some(&l) => {
                *out = l;
                PgStatus::Ok
            }
            None => {
                set_error(format!("vertex {v} out of range"));
                PgStatus::OutOfRange
            }
        }
    })
}

/// Average delay of `j` from `i`.
///
/// # Safety
/// `est` must be a live estimate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_ad(est: *const PgEstimate, i: usize, j: usize, out: *mut f64) -> PgStatus {
    guard(|| {
        let (Some(e), false) = (est.as_ref(), out.is_null()) else {
            return null("estimate or out");
        };
        let n = e.ids.len();
        if i >= n || j >= n {
            set_error(format!("pair ({i}, {j}) out of range for {n} vertices"));
            return PgStatus::OutOfRange;
        }
        *out = e.est.ad.get(i, j);
        PgStatus::Ok
    })
}

/// Graphviz rendering of the estimate. Free with `pg_string_free`.
///
/// # Safety
/// `est` must be a live estimate handle.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_to_dot(est: *const PgEstimate) -> *mut c_char {
    est.as_ref().map_or(ptr::null_mut(), |e| {
        into_c_string(to_dot(&e.ids, &e.est.graph, &e.est.layers))
    })
}

/// # Safety
/// `est` must come from `pg_estimate` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_estimate_free(est: *mut PgEstimate) {
    if !est.is_null() {
        drop(Box::from_raw(est));
    }
}

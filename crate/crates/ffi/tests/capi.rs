use std::ffi::{CStr, CString};
use std::ptr;

use propgraph_ffi::*;

fn last_error() -> String {
    let p = pg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { pg_string_free(p) };
    s
}

fn dataset(series: &[(&str, &[f64])]) -> *mut PgDataset {
    let ds = pg_dataset_new();
    for (id, v) in series {
        let id = CString::new(*id).unwrap();
        let st = unsafe { pg_dataset_push(ds, id.as_ptr(), v.as_ptr(), v.len()) };
        assert_eq!(st, PgStatus::Ok);
    }
    ds
}

const A: [f64; 10] = [1., 1., 0., -1., -1., 1., 1., 2., 0., -1.];
const B: [f64; 10] = [0., 1., 1., 0., -1., 1., 1., 1., 2., 0.];

#[test]
fn align_warping_pair() {
    let ds = dataset(&[("i", &A), ("j", &B)]);
    let cfg = pg_align_config_default();
    let mut al = ptr::null_mut();
    assert_eq!(unsafe { pg_align(ds, 0, 1, &cfg, &mut al) }, PgStatus::Ok);
    unsafe {
        assert_eq!(pg_alignment_min_cost(al), 2.0);
        assert_eq!(pg_alignment_avg_delay(al), 4.45);
        assert_eq!(take_string(pg_alignment_count(al)), "20");
        assert_eq!(take_string(pg_alignment_delay_sum(al)), "89");
        pg_alignment_free(al);
        pg_dataset_free(ds);
    }
}

#[test]
fn align_gap_pair() {
    let bits = |s: &str| s.bytes().map(|c| f64::from(c - b'0')).collect::<Vec<_>>();
    let (x, y) = (bits("001000100"), bits("000100010"));
    let ds = dataset(&[("x", &x), ("y", &y)]);
    let cfg = PgAlignConfig {
        mode: PgAlignMode::Gap,
        cost: PgCost::Binary,
        ..pg_align_config_default()
    };
    let mut al = ptr::null_mut();
    assert_eq!(unsafe { pg_align(ds, 0, 1, &cfg, &mut al) }, PgStatus::Ok);
    unsafe {
        assert_eq!(pg_alignment_avg_delay(al), 6.5);
        assert_eq!(take_string(pg_alignment_count(al)), "6");
        pg_alignment_free(al);
        pg_dataset_free(ds);
    }
}

#[test]
fn estimate_chain() {
    // c lags b lags a by one step each.
    let a: Vec<f64> = (0..30).map(|t| ((t * 7) % 11) as f64).collect();
    let shift = |k: usize| -> Vec<f64> { (0..30usize).map(|t| a[t.saturating_sub(k)]).collect() };
    let (b, c) = (shift(1), shift(2));
    let ds = dataset(&[("a", &a), ("b", &b), ("c", &c)]);
    let acfg = pg_align_config_default();
    let ecfg = pg_estimate_config_default();
    let mut est = ptr::null_mut();
    assert_eq!(
        unsafe { pg_estimate(ds, PgMethod::Proposed, &acfg, &ecfg, &mut est) },
        PgStatus::Ok
    );
    unsafe {
        assert_eq!(pg_estimate_num_vertices(est), 3);
        let mut ad = 0.0;
        assert_eq!(pg_estimate_ad(est, 0, 1, &mut ad), PgStatus::Ok);
        assert!(ad > 0.0);
        let mut back = 0.0;
        pg_estimate_ad(est, 1, 0, &mut back);
        assert_eq!(back, -ad);
        let mut l = 99;
        assert_eq!(pg_estimate_layer_of(est, 0, &mut l), PgStatus::Ok);
        assert_eq!(l, 0);
        for k in 0..pg_estimate_num_edges(est) {
            let mut e = PgEdge { src: 0, dst: 0, ad: 0.0 };
            assert_eq!(pg_estimate_edge(est, k, &mut e), PgStatus::Ok);
            assert!(e.ad > 0.0);
        }
        let mut e = PgEdge { src: 0, dst: 0, ad: 0.0 };
        assert_eq!(pg_estimate_edge(est, 99, &mut e), PgStatus::OutOfRange);
        let dot = take_string(pg_estimate_to_dot(est));
        assert!(dot.starts_with("digraph"));
        pg_estimate_free(est);
        pg_dataset_free(ds);
    }
}

#[test]
fn errors_have_codes_and_messages() {
    let ds = dataset(&[("only", &A)]);
    let (acfg, ecfg) = (pg_align_config_default(), pg_estimate_config_default());
    let mut est = ptr::null_mut();
    let st = unsafe { pg_estimate(ds, PgMethod::Proposed, &acfg, &ecfg, &mut est) };
    assert_eq!(st, PgStatus::Degenerate);
    assert!(est.is_null());
    assert!(last_error().contains("need ≥ 2 individuals"));

    let id = CString::new("short").unwrap();
    let st = unsafe { pg_dataset_push(ds, id.as_ptr(), B.as_ptr(), 3) };
    assert_eq!(st, PgStatus::InvalidInput);

    let nan = [f64::NAN; 10];
    let id = CString::new("bad").unwrap();
    let st = unsafe { pg_dataset_push(ds, id.as_ptr(), nan.as_ptr(), 10) };
    assert_eq!(st, PgStatus::InvalidInput);

    let mut al = ptr::null_mut();
    assert_eq!(unsafe { pg_align(ds, 0, 5, &acfg, &mut al) }, PgStatus::OutOfRange);
    assert_eq!(unsafe { pg_align(ptr::null(), 0, 0, &acfg, &mut al) }, PgStatus::NullPointer);
    unsafe { pg_dataset_free(ds) };
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("d.csv").to_str().unwrap()).unwrap();
    let ds = dataset(&[("i", &A), ("j", &B)]);
    assert_eq!(unsafe { pg_dataset_write_csv(ds, path.as_ptr()) }, PgStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { pg_dataset_read_csv(path.as_ptr(), &mut back) }, PgStatus::Ok);
    unsafe {
        assert_eq!(pg_dataset_len(back), 2);
        assert_eq!(pg_dataset_series_len(back), 10);
        pg_dataset_free(back);
        pg_dataset_free(ds);
    }
    let missing = CString::new("/nonexistent/x.csv").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pg_dataset_read_csv(missing.as_ptr(), &mut out) }, PgStatus::Io);
    assert!(out.is_null());
}

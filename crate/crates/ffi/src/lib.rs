//! C ABI over `layers-core`.
//!
//! Graphs and reports are opaque handles owned by the caller and released
//! with their `_free` function. Every entry point returns a [`LayersStatus`];
//! on failure the message is kept per thread and can be fetched with
//! [`layers_last_error_message`]. Strings returned to C are freed with
//! [`layers_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use layers_core::experiment::{self, ExperimentConfig, ExperimentReport};
use layers_core::graph::{simple_graph_from_sequence, DegreeSequence};
use layers_core::layers::{lattice_layer, tk_largest_component};
use layers_core::seed::trial_rng;
use layers_core::{compute_layers, sample_ages, Graph, LatticePoint, LayersError, LazyAgeSource};

/// Attempts allowed when rejection-sampling a simple graph.
const SIMPLE_ATTEMPTS: usize = 100_000;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayersStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    TiesDetected = 4,
    InvalidConfig = 5,
    Io = 6,
    LimitExceeded = 7,
    Panic = 8,
}

/// Opaque simple graph.
pub struct LayersGraph {
    inner: Graph,
}

/// Opaque experiment report.
pub struct LayersReport {
    inner: ExperimentReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &LayersError) -> LayersStatus {
    use LayersError::*;
    match e {
        DuplicateEdge(..) | SelfLoop(_) | EndpointOutOfRange { .. } | DepthZero | OddDegreeSum | AttemptsExhausted(_) => {
            LayersStatus::InvalidGraph
        }
        TiesDetected(..) => LayersStatus::TiesDetected,
        UnknownExperiment(_) | InvalidConfig(_) | Parse(_) | BadConfig(_) => LayersStatus::InvalidConfig,
        IoFailure(_) => LayersStatus::Io,
        TooLarge { .. } | EnumerationTooLarge(_) | BudgetExhausted(_) => LayersStatus::LimitExceeded,
        DegreeTooSmall(_) | KTooLarge(_) | BadOrder(..) | DivergentSeries(_) => LayersStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Arg(String),
    Core(LayersError),
}

impl From<LayersError> for Failure {
    fn from(e: LayersError) -> Self {
        Failure::Core(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> LayersStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LayersStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            LayersStatus::NullPointer
        }
        Ok(Err(Failure::Arg(msg))) => {
            set_error(msg);
            LayersStatus::InvalidArgument
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            LayersStatus::Panic
        }
    }
}

fn nonnull<T>(p: *const T, what: &'static str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::Null(what))
    } else {
        Ok(())
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    nonnull(p, what)?;
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn graph<'a>(g: *const LayersGraph) -> Result<&'a Graph, Failure> {
    nonnull(g, "graph")?;
    Ok(&(*g).inner)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Builds a simple graph on `n` vertices from `edge_count` pairs stored
/// flat in `edges` (`2 * edge_count` entries).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (it may be null
/// when `edge_count` is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn layers_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut LayersGraph,
) -> LayersStatus {
    guard(|| {
        nonnull(out, "out")?;
        let flat = slice(edges, edge_count.checked_mul(2).ok_or(Failure::Arg("edge count overflow".into()))?, "edges")?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let g = Graph::from_edges(n, &pairs)?;
        *out = Box::into_raw(Box::new(LayersGraph { inner: g }));
        Ok(())
    })
}

/// Samples a uniform simple graph with the given degree sequence.
///
/// # Safety
/// `degrees` must point to `n` readable values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn layers_graph_from_degrees(
    degrees: *const usize,
    n: usize,
    seed: u64,
    out: *mut *mut LayersGraph,
) -> LayersStatus {
    guard(|| {
        nonnull(out, "out")?;
        let seq = DegreeSequence::new(slice(degrees, n, "degrees")?.to_vec())?;
        let mut rng = trial_rng(seed, "ffi/degrees", 0);
        let g = simple_graph_from_sequence(&seq, &mut rng, SIMPLE_ATTEMPTS)?;
        *out = Box::into_raw(Box::new(LayersGraph { inner: g }));
        Ok(())
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn layers_graph_vertex_count(g: *const LayersGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn layers_graph_edge_count(g: *const LayersGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn layers_graph_free(g: *mut LayersGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// One age draw: writes the layer of every vertex into `layers_out`, which
/// holds `len` entries and must be exactly the vertex count.
///
/// # Safety
/// `g` must be a live handle and `layers_out` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn layers_sample_layers(
    g: *const LayersGraph,
    seed: u64,
    layers_out: *mut u32,
    len: usize,
) -> LayersStatus {
    guard(|| {
        let g = graph(g)?;
        nonnull(layers_out, "layers_out")?;
        if len != g.n() {
            return Err(Failure::Arg(format!("buffer holds {len} entries for {} vertices", g.n())));
        }
        let mut rng = trial_rng(seed, "ffi/layers", 0);
        let res = compute_layers(g, &sample_ages(g, &mut rng))?;
        std::slice::from_raw_parts_mut(layers_out, len).copy_from_slice(&res.layer);
        Ok(())
    })
}

/// Largest component of `T_k` under one age draw. Uses the same draw as
/// [`layers_sample_layers`] for equal seeds.
///
/// # Safety
/// `g` must be a live handle and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn layers_tk_largest_component(
    g: *const LayersGraph,
    seed: u64,
    k: u32,
    out: *mut usize,
) -> LayersStatus {
    guard(|| {
        let g = graph(g)?;
        nonnull(out, "out")?;
        if k == 0 {
            return Err(Failure::Arg("k must be at least 1".into()));
        }
        let mut rng = trial_rng(seed, "ffi/layers", 0);
        let res = compute_layers(g, &sample_ages(g, &mut rng))?;
        *out = tk_largest_component(g, &res, k);
        Ok(())
    })
}

/// Layer of a point of `Z^d` under the lazy age field of `seed`, and whether
/// it lies in `T_k`.
///
/// # Safety
/// `coords` must point to `d` readable values; `layer_out` and `open_out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn layers_lattice_is_open(
    seed: u64,
    coords: *const i64,
    d: usize,
    k: usize,
    layer_out: *mut usize,
    open_out: *mut bool,
) -> LayersStatus {
    guard(|| {
        nonnull(layer_out, "layer_out")?;
        nonnull(open_out, "open_out")?;
        if d == 0 {
            return Err(Failure::Arg("dimension must be at least 1".into()));
        }
        let p = LatticePoint(slice(coords, d, "coords")?.to_vec());
        let layer = lattice_layer(&LazyAgeSource::new(seed), &p)?;
        *layer_out = layer;
        *open_out = layer <= k;
        Ok(())
    })
}

/// Runs an experiment from `key = value` config text.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn layers_run_experiment(config: *const c_char, out: *mut *mut LayersReport) -> LayersStatus {
    guard(|| {
        nonnull(config, "config")?;
        nonnull(out, "out")?;
        let text = CStr::from_ptr(config).to_str().map_err(|e| Failure::Arg(format!("config is not UTF-8: {e}")))?;
        let cfg = ExperimentConfig::parse(text)?;
        let report = experiment::run(&cfg)?;
        *out = Box::into_raw(Box::new(LayersReport { inner: report }));
        Ok(())
    })
}

/// Invariant violations counted by the report, or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn layers_report_violations(r: *const LayersReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.violations)
}

/// CSV rendering; free with [`layers_string_free`]. Null on a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn layers_report_csv(r: *const LayersReport) -> *mut c_char {
    r.as_ref().map_or(ptr::null_mut(), |r| into_c_string(r.inner.to_csv()))
}

/// JSON rendering; free with [`layers_string_free`]. Null on a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn layers_report_json(r: *const LayersReport) -> *mut c_char {
    r.as_ref().map_or(ptr::null_mut(), |r| into_c_string(r.inner.to_json()))
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn layers_report_free(r: *mut LayersReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Message of the last failed call on this thread, or null if the last call
/// succeeded. Free with [`layers_string_free`].
#[no_mangle]
pub extern "C" fn layers_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn layers_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

//! C ABI over `ncs-core`.
//!
//! Every fallible call returns an [`NcsStatus`]; on failure a message is kept
//! per thread and can be read with [`ncs_last_error_message`]. Graphs are
//! opaque handles released with [`ncs_graph_free`]. Strings returned through
//! `char **` out-parameters are owned by the caller and released with
//! [`ncs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ncs_core::bounds::{edge_count_lower_bound, k_resilient, tight_bound};
use ncs_core::cli::sync_document;
use ncs_core::error::NcsError;
use ncs_core::graph::format::{parse_graph, to_json};
use ncs_core::graph::NcsGraph as CoreGraph;
use ncs_core::min_graph::{minimum_ncs_graphs, MinGraphOptions};
use ncs_core::solvers::Algorithm;
use ncs_core::tiered::build_tiered_plan;

/// Result code of every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    Disconnected = 4,
    Parse = 5,
    NoSolution = 6,
    Ambiguous = 7,
    Infeasible = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcsAlgorithm {
    Exhaustive = 0,
    Fast = 1,
}

impl From<NcsAlgorithm> for Algorithm {
    fn from(a: NcsAlgorithm) -> Self {
        match a {
            NcsAlgorithm::Exhaustive => Algorithm::Exhaustive,
            NcsAlgorithm::Fast => Algorithm::Fast,
        }
    }
}

/// Opaque synchronization graph.
pub struct NcsGraph {
    inner: CoreGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &NcsError) -> NcsStatus {
    match e {
        NcsError::TooFewNodes { .. }
        | NcsError::NodeOutOfRange { .. }
        | NcsError::SelfLoop(_)
        | NcsError::DuplicateEdge(_)
        | NcsError::EdgeNotInGraph(_)
        | NcsError::SameEndpoints(_) => NcsStatus::InvalidGraph,
        NcsError::Disconnected => NcsStatus::Disconnected,
        NcsError::Parse(_)
        | NcsError::MeasurementMismatch(_)
        | NcsError::OffsetLengthMismatch { .. } => NcsStatus::Parse,
        NcsError::NoSolutionFound | NcsError::Underdetermined => NcsStatus::NoSolution,
        NcsError::Ambiguous { .. } => NcsStatus::Ambiguous,
        NcsError::Infeasible { .. } => NcsStatus::Infeasible,
        NcsError::ZeroFault(_) | NcsError::TooManyFaults { .. } | NcsError::InvalidArgument(_) => {
            NcsStatus::InvalidArgument
        }
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (NcsStatus, String)>) -> NcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NcsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NcsStatus::Internal
        }
    }
}

fn domain(e: NcsError) -> (NcsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (NcsStatus, String) {
    (NcsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn graph_ref<'a>(g: *const NcsGraph) -> Result<&'a CoreGraph, (NcsStatus, String)> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null("graph"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (NcsStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (NcsStatus::Parse, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (NcsStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_json(
    out: *mut *mut c_char,
    v: &serde_json::Value,
) -> Result<(), (NcsStatus, String)> {
    let text = serde_json::to_string(v).map_err(|e| (NcsStatus::Internal, e.to_string()))?;
    let c = CString::new(text).map_err(|e| (NcsStatus::Internal, e.to_string()))?;
    write_out(out, c.into_raw())
}

unsafe fn write_graph(out: *mut *mut NcsGraph, g: CoreGraph) -> Result<(), (NcsStatus, String)> {
    write_out(out, Box::into_raw(Box::new(NcsGraph { inner: g })))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ncs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a graph from `edge_count` pairs stored flat in `edges` (`2 * edge_count` ids).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (or be null when
/// `edge_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_graph_new(
    nodes: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut NcsGraph,
) -> NcsStatus {
    guard(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        let g = CoreGraph::from_pairs(nodes, &pairs).map_err(domain)?;
        write_graph(out, g)
    })
}

/// Complete graph on `nodes` nodes.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_graph_complete(nodes: usize, out: *mut *mut NcsGraph) -> NcsStatus {
    guard(|| {
        if nodes == 0 {
            return Err((
                NcsStatus::InvalidArgument,
                "a graph needs at least one node".into(),
            ));
        }
        write_graph(out, CoreGraph::complete(nodes))
    })
}

/// Parses a graph file body: a JSON object or a plain edge list.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_graph_parse(
    text: *const c_char,
    out: *mut *mut NcsGraph,
) -> NcsStatus {
    guard(|| {
        let g = parse_graph(read_str(text, "text")?).map_err(domain)?;
        write_graph(out, g)
    })
}

/// # Safety
/// `graph` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ncs_graph_free(graph: *mut NcsGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncs_graph_node_count(graph: *const NcsGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.node_count())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncs_graph_edge_count(graph: *const NcsGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// Graph as `{"edges": [[a, b], ...], "nodes": N}`.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_graph_to_json(
    graph: *const NcsGraph,
    out: *mut *mut c_char,
) -> NcsStatus {
    guard(|| write_json(out, &to_json(graph_ref(graph)?)))
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_edge_connectivity(
    graph: *const NcsGraph,
    out: *mut usize,
) -> NcsStatus {
    guard(|| {
        let lambda = graph_ref(graph)?.edge_connectivity().map_err(domain)?;
        write_out(out, lambda)
    })
}

/// Largest K for which the graph is K-resilient.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_tight_bound(graph: *const NcsGraph, out: *mut usize) -> NcsStatus {
    guard(|| {
        let report = tight_bound(graph_ref(graph)?).map_err(domain)?;
        write_out(out, report.tight_bound)
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_is_k_resilient(
    graph: *const NcsGraph,
    k: usize,
    out: *mut bool,
) -> NcsStatus {
    guard(|| write_out(out, k_resilient(graph_ref(graph)?, k)))
}

/// Fewest edges any k-resilient graph on `nodes` nodes can have.
#[no_mangle]
pub extern "C" fn ncs_edge_count_lower_bound(nodes: usize, k: usize) -> usize {
    edge_count_lower_bound(nodes, k)
}

/// Solves a measurement document `{"graph": ..., "measurements": [[a, b, value], ...]}`
/// and writes the result as JSON. With `exact` false the values are read as
/// doubles and `eta` is the residual threshold.
///
/// # Safety
/// `measurements` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_sync_json(
    measurements: *const c_char,
    algorithm: NcsAlgorithm,
    exact: bool,
    eta: f64,
    out: *mut *mut c_char,
) -> NcsStatus {
    guard(|| {
        let text = read_str(measurements, "measurements")?;
        let v = sync_document(text, algorithm.into(), exact, eta).map_err(domain)?;
        write_json(out, &v)
    })
}

/// Minimum k-resilient graphs on `nodes` nodes, as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_min_graph_json(
    nodes: usize,
    k: usize,
    limit: usize,
    dedup: bool,
    out: *mut *mut c_char,
) -> NcsStatus {
    guard(|| {
        let r = minimum_ncs_graphs(
            nodes,
            k,
            MinGraphOptions {
                limit,
                dedup_isomorphic: dedup,
            },
        )
        .map_err(domain)?;
        let v = serde_json::json!({
            "achieves_lower_bound": r.achieves_lower_bound,
            "edge_count": r.edge_count,
            "graphs": r.graphs.iter().map(to_json).collect::<Vec<_>>(),
            "lower_bound": r.lower_bound,
            "total_found": r.total_found,
        });
        write_json(out, &v)
    })
}

/// Tiered group plan for `nodes` nodes, as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ncs_tier_plan_json(nodes: usize, out: *mut *mut c_char) -> NcsStatus {
    guard(|| {
        let plan = build_tiered_plan(nodes).map_err(domain)?;
        write_json(
            out,
            &serde_json::to_value(plan).map_err(|e| (NcsStatus::Internal, e.to_string()))?,
        )
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ncs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

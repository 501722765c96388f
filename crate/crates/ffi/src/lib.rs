//! C ABI over `wmhn-core`.
//!
//! Topologies and optimizer reports cross the boundary as opaque handles that
//! the caller releases with the matching `*_free` function. Every fallible
//! call returns a [`WmhnStatus`]; on failure, [`wmhn_last_error_message`]
//! describes the most recent error on the calling thread. Strings handed out
//! by the library are released with [`wmhn_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wmhn_core::net::generate_topology;
use wmhn_core::optimizers::{run_algorithm, Algorithm, OptimizerReport};
use wmhn_core::{route, Error, RadioConstants, Topology};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmhnStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    Parse = 3,
    Io = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WmhnAlgorithm {
    Bf = 0,
    Cdp = 1,
    Eqpo = 2,
    Ndqo = 3,
    Ndqio = 4,
}

impl From<WmhnAlgorithm> for Algorithm {
    fn from(a: WmhnAlgorithm) -> Self {
        match a {
            WmhnAlgorithm::Bf => Algorithm::Bf,
            WmhnAlgorithm::Cdp => Algorithm::Cdp,
            WmhnAlgorithm::Eqpo => Algorithm::Eqpo,
            WmhnAlgorithm::Ndqo => Algorithm::Ndqo,
            WmhnAlgorithm::Ndqio => Algorithm::Ndqio,
        }
    }
}

/// `[BER, power, delay]` of a route.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WmhnUtilityVector {
    pub ber: f64,
    pub power: f64,
    pub delay: u32,
}

/// Opaque network topology.
pub struct WmhnTopology(Topology);

/// Opaque optimizer report.
pub struct WmhnReport(OptimizerReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> WmhnStatus {
    match err {
        Error::InvalidArgument(_) => WmhnStatus::InvalidArgument,
        Error::Parse(_) | Error::Json(_) => WmhnStatus::Parse,
        Error::Io { .. } => WmhnStatus::Io,
    }
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> WmhnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WmhnStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            WmhnStatus::NullPointer
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_error(msg);
            WmhnStatus::InvalidArgument
        }
        Err(_) => {
            set_error("internal panic".to_string());
            WmhnStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("library strings contain no NULs").into_raw()
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wmhn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Number of loop-free routes from node 1 to node `n_nodes`.
///
/// # Safety
/// `out` must be null or valid for writing one `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn wmhn_count_routes(n_nodes: usize, out: *mut u64) -> WmhnStatus {
    guard(|| write_out(out, route::count_routes(n_nodes)?))
}

/// Writes the route with index `id` as a string such as `{1 3 2 5}`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wmhn_route_string(id: u64, n_nodes: usize, out: *mut *mut c_char) -> WmhnStatus {
    guard(|| {
        let r = route::decode(route::RouteId(id), n_nodes)?;
        write_out(out, into_c_string(r.to_string()))
    })
}

/// Draws a random topology with the default radio constants.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wmhn_topology_generate(n_nodes: usize, seed: u64, out: *mut *mut WmhnTopology) -> WmhnStatus {
    guard(|| {
        let topo = generate_topology(n_nodes, seed, RadioConstants::default())?;
        write_out(out, Box::into_raw(Box::new(WmhnTopology(topo))))
    })
}

/// Parses a topology from a NUL-terminated JSON document.
///
/// # Safety
/// `json` must be null or a valid NUL-terminated string; `out` must be null or
/// valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wmhn_topology_from_json(json: *const c_char, out: *mut *mut WmhnTopology) -> WmhnStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure::Core(Error::Parse(format!("topology JSON is not UTF-8: {e}"))))?;
        let topo = Topology::from_json(text)?;
        write_out(out, Box::into_raw(Box::new(WmhnTopology(topo))))
    })
}

/// Serializes a topology to JSON. Free the result with [`wmhn_string_free`].
///
/// # Safety
/// `topo` must be null or a live handle; `out` must be null or valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wmhn_topology_to_json(topo: *const WmhnTopology, out: *mut *mut c_char) -> WmhnStatus {
    guard(|| {
        let topo = deref(topo, "topology")?;
        write_out(out, into_c_string(topo.0.to_json()))
    })
}

/// Number of nodes in a topology, or 0 for a null handle.
///
/// # Safety
/// `topo` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wmhn_topology_n_nodes(topo: *const WmhnTopology) -> usize {
    topo.as_ref().map_or(0, |t| t.0.n_nodes)
}

/// Utility vector of the route visiting `nodes[0..len]` (1-based node
/// numbers, source first, destination last).
///
/// # Safety
/// `topo` must be null or a live handle; `nodes` must be null or valid for
/// reading `len` elements; `out` must be null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn wmhn_topology_route_uv(
    topo: *const WmhnTopology,
    nodes: *const usize,
    len: usize,
    out: *mut WmhnUtilityVector,
) -> WmhnStatus {
    guard(|| {
        let topo = deref(topo, "topology")?;
        if nodes.is_null() {
            return Err(Failure::Null("nodes"));
        }
        let nodes = std::slice::from_raw_parts(nodes, len).to_vec();
        let r = route::Route::new(nodes, topo.0.n_nodes)?;
        let uv = topo.0.route_uv(&r);
        write_out(
            out,
            WmhnUtilityVector {
                ber: uv.ber,
                power: uv.power,
                delay: uv.delay,
            },
        )
    })
}

/// # Safety
/// `topo` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wmhn_topology_free(topo: *mut WmhnTopology) {
    if !topo.is_null() {
        drop(Box::from_raw(topo));
    }
}

/// Runs one optimizer on a topology. `seed` drives the stochastic
/// optimizers and is ignored by the deterministic ones.
///
/// # Safety
/// `topo` must be null or a live handle; `out` must be null or valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wmhn_run(
    topo: *const WmhnTopology,
    algorithm: WmhnAlgorithm,
    seed: u64,
    out: *mut *mut WmhnReport,
) -> WmhnStatus {
    guard(|| {
        let topo = deref(topo, "topology")?;
        if topo.0.n_nodes >= 10 && algorithm == WmhnAlgorithm::Bf {
            return Err(Failure::Invalid("brute force is limited to fewer than 10 nodes".into()));
        }
        let report = run_algorithm(algorithm.into(), &topo.0, seed)?;
        write_out(out, Box::into_raw(Box::new(WmhnReport(report))))
    })
}

/// Number of routes in the reported front, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wmhn_report_opf_len(report: *const WmhnReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.opf.len())
}

/// Index of the `i`-th front route, in increasing index order.
///
/// # Safety
/// `report` must be null or a live handle; `out` must be null or valid for
/// writing one `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn wmhn_report_opf_route_id(report: *const WmhnReport, i: usize, out: *mut u64) -> WmhnStatus {
    guard(|| {
        let report = deref(report, "report")?;
        let id = report
            .0
            .opf
            .ids()
            .nth(i)
            .ok_or_else(|| Failure::Invalid(format!("front index {i} out of range")))?;
        write_out(out, id.0)
    })
}

/// Parallel cost-function evaluations spent, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wmhn_report_parallel_cfes(report: *const WmhnReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.ledger.parallel())
}

/// Sequential cost-function evaluations spent, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wmhn_report_sequential_cfes(report: *const WmhnReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.ledger.sequential())
}

/// Serializes a report to JSON. Free the result with [`wmhn_string_free`].
///
/// # Safety
/// `report` must be null or a live handle; `out` must be null or valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn wmhn_report_to_json(report: *const WmhnReport, out: *mut *mut c_char) -> WmhnStatus {
    guard(|| {
        let report = deref(report, "report")?;
        write_out(out, into_c_string(report.0.to_json()))
    })
}

/// # Safety
/// `report` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wmhn_report_free(report: *mut WmhnReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wmhn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

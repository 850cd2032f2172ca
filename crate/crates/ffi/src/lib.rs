//! C ABI over `lambda_hvm`.
//!
//! Objects are opaque handles created by `lh_*_new`/`lh_*_parse` and released
//! with the matching `lh_*_free`. Every fallible call returns an [`LhStatus`];
//! on failure the message is kept per thread and read with
//! [`lh_last_error`]. Panics are caught at the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lambda_hvm::hvm::{decompose_state, parse_circuit, run_shots, Circuit, HvmError, Mode, Model, State};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    /// The state lies outside the polytope.
    Infeasible = 3,
    BufferTooSmall = 4,
    Failure = 5,
    Panic = 6,
}

/// Vertex model for fixed `(d, n)`.
pub struct LhModel {
    inner: Model,
}

/// A parsed circuit with its input state.
pub struct LhCircuit {
    inner: Circuit,
}

/// Sparse probability vector over vertices.
pub struct LhDistribution {
    support: Vec<(usize, f64)>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(code: LhStatus, msg: impl Into<String>) -> LhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    code
}

fn hvm_status(e: HvmError) -> LhStatus {
    let code = match e {
        HvmError::Infeasible { .. } => LhStatus::Infeasible,
        HvmError::Preset(_) | HvmError::Dimension(_) | HvmError::Circuit(_) => LhStatus::InvalidArgument,
        _ => LhStatus::Failure,
    };
    fail(code, e.to_string())
}

fn guard(f: impl FnOnce() -> LhStatus) -> LhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(LhStatus::Panic, msg)
        }
    }
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, LhStatus> {
    if s.is_null() {
        return Err(fail(LhStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(LhStatus::InvalidArgument, "string is not UTF-8"))
}

fn auto_mode(st: &State) -> Mode {
    if st.exact().is_some() && st.w_exact().is_some() {
        Mode::Exact
    } else {
        Mode::Numeric
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (truncated,
/// always NUL-terminated when `cap > 0`) and returns its full length in
/// bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn lh_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = e.len().min(cap - 1);
            ptr::copy_nonoverlapping(e.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Builds the vertex model for `d` and `n`, enumerating vertices.
///
/// # Safety
/// `out` must be a valid pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn lh_model_new(d: u32, n: u32, out: *mut *mut LhModel) -> LhStatus {
    guard(|| {
        if out.is_null() {
            return fail(LhStatus::NullArgument, "out is null");
        }
        if d < 2 || n < 1 {
            return fail(LhStatus::InvalidArgument, format!("need d >= 2 and n >= 1, got d={d} n={n}"));
        }
        match Model::new(d, n as usize) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(LhModel { inner: m }));
                LhStatus::Ok
            }
            Err(e) => hvm_status(e),
        }
    })
}

/// # Safety
/// `m` must be null or a handle from [`lh_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lh_model_free(m: *mut LhModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn lh_model_vertex_count(m: *const LhModel) -> usize {
    m.as_ref().map_or(0, |m| m.inner.vertices().len())
}

/// Length of a character-coordinate vector, `d^(2n)`.
///
/// # Safety
/// `m` must be null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn lh_model_coord_len(m: *const LhModel) -> usize {
    m.as_ref().map_or(0, |m| m.inner.space().size())
}

/// Writes the character coordinates of vertex `alpha` into `out`.
///
/// # Safety
/// `m` must be a live model handle and `out` must point to `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn lh_model_vertex_w(m: *const LhModel, alpha: usize, out: *mut f64, cap: usize) -> LhStatus {
    guard(|| {
        let Some(m) = m.as_ref() else {
            return fail(LhStatus::NullArgument, "model is null");
        };
        if out.is_null() {
            return fail(LhStatus::NullArgument, "out is null");
        }
        let v = m.inner.vertices();
        if alpha >= v.len() {
            return fail(LhStatus::InvalidArgument, format!("vertex {alpha} out of range (have {})", v.len()));
        }
        let w = v.w_f64(alpha);
        if cap < w.len() {
            return fail(LhStatus::BufferTooSmall, format!("need {} entries", w.len()));
        }
        ptr::copy_nonoverlapping(w.as_ptr(), out, w.len());
        LhStatus::Ok
    })
}

/// Decomposes a named preset state over the vertices.
///
/// # Safety
/// `m` must be a live model handle, `name` a NUL-terminated string and `out`
/// a valid pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn lh_decompose_preset(
    m: *const LhModel,
    name: *const c_char,
    out: *mut *mut LhDistribution,
) -> LhStatus {
    guard(|| {
        let Some(m) = m.as_ref() else {
            return fail(LhStatus::NullArgument, "model is null");
        };
        if out.is_null() {
            return fail(LhStatus::NullArgument, "out is null");
        }
        let name = match c_str(name) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let st = match State::preset(m.inner.space(), name) {
            Ok(s) => s,
            Err(e) => return hvm_status(e),
        };
        match decompose_state(&m.inner, &st, auto_mode(&st)) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(LhDistribution { support: p.support_f64() }));
                LhStatus::Ok
            }
            Err(e) => hvm_status(e),
        }
    })
}

/// # Safety
/// `p` must be null or a live distribution handle.
#[no_mangle]
pub unsafe extern "C" fn lh_distribution_len(p: *const LhDistribution) -> usize {
    p.as_ref().map_or(0, |p| p.support.len())
}

/// Entry `i` of the support: vertex index and weight.
///
/// # Safety
/// `p` must be a live distribution handle; `vertex` and `weight` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lh_distribution_get(
    p: *const LhDistribution,
    i: usize,
    vertex: *mut usize,
    weight: *mut f64,
) -> LhStatus {
    let Some(p) = p.as_ref() else {
        return fail(LhStatus::NullArgument, "distribution is null");
    };
    if vertex.is_null() || weight.is_null() {
        return fail(LhStatus::NullArgument, "output pointer is null");
    }
    match p.support.get(i) {
        Some(&(a, w)) => {
            *vertex = a;
            *weight = w;
            LhStatus::Ok
        }
        None => fail(LhStatus::InvalidArgument, format!("index {i} out of range")),
    }
}

/// # Safety
/// `p` must be null or a handle from [`lh_decompose_preset`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lh_distribution_free(p: *mut LhDistribution) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parses a JSON circuit description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer to write
/// a handle to.
#[no_mangle]
pub unsafe extern "C" fn lh_circuit_parse(json: *const c_char, out: *mut *mut LhCircuit) -> LhStatus {
    guard(|| {
        if out.is_null() {
            return fail(LhStatus::NullArgument, "out is null");
        }
        let text = match c_str(json) {
            Ok(s) => s,
            Err(e) => return e,
        };
        match parse_circuit(text) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(LhCircuit { inner: c }));
                LhStatus::Ok
            }
            Err(e) => hvm_status(e),
        }
    })
}

/// Number of measurements, which is the outcome count per shot.
///
/// # Safety
/// `c` must be null or a live circuit handle.
#[no_mangle]
pub unsafe extern "C" fn lh_circuit_measurements(c: *const LhCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.inner.measurement_count())
}

/// # Safety
/// `c` must be null or a handle from [`lh_circuit_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lh_circuit_free(c: *mut LhCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Runs `shots` seeded trajectories. Outcomes are written row-major into
/// `outcomes` (`shots * measurements` entries) and final vertices into
/// `final_vertices` (`shots` entries); either may be null to skip it.
///
/// # Safety
/// `m` and `c` must be live handles; non-null buffers must hold the stated
/// number of entries given by their capacities.
#[no_mangle]
pub unsafe extern "C" fn lh_sample(
    m: *const LhModel,
    c: *const LhCircuit,
    seed: u64,
    shots: u64,
    outcomes: *mut u32,
    outcomes_cap: usize,
    final_vertices: *mut usize,
    vertices_cap: usize,
) -> LhStatus {
    guard(|| {
        let (Some(m), Some(c)) = (m.as_ref(), c.as_ref()) else {
            return fail(LhStatus::NullArgument, "model or circuit is null");
        };
        let k = c.inner.measurement_count();
        let need = (shots as usize).saturating_mul(k);
        if !outcomes.is_null() && outcomes_cap < need {
            return fail(LhStatus::BufferTooSmall, format!("need {need} outcome entries"));
        }
        if !final_vertices.is_null() && vertices_cap < shots as usize {
            return fail(LhStatus::BufferTooSmall, format!("need {shots} vertex entries"));
        }
        if c.inner.space != *m.inner.space() {
            return fail(LhStatus::InvalidArgument, "circuit and model dimensions differ");
        }
        let st = &c.inner.state;
        let p = match decompose_state(&m.inner, st, auto_mode(st)) {
            Ok(p) => p,
            Err(e) => return hvm_status(e),
        };
        let recs = match run_shots(&m.inner, &c.inner, &p.support_f64(), seed, shots) {
            Ok(r) => r,
            Err(e) => return hvm_status(e),
        };
        for (i, r) in recs.iter().enumerate() {
            if !outcomes.is_null() {
                ptr::copy_nonoverlapping(r.outcomes.as_ptr(), outcomes.add(i * k), k);
            }
            if !final_vertices.is_null() {
                *final_vertices.add(i) = r.final_vertex;
            }
        }
        LhStatus::Ok
    })
}

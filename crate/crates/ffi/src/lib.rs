//! C ABI over the `dynalg` core.
//!
//! Conventions, mirrored in `include/dynalg.h`:
//!
//! * Representations and states are opaque handles created by
//!   `dynalg_rep_*` / `dynalg_state_*` constructors and released with the
//!   matching `_free` function. Freeing null is a no-op.
//! * Every fallible entry point returns an `i32` drawn from [`DynalgStatus`]
//!   and reports results through out-pointers, which are written only on
//!   `Ok`. On failure a thread-local message is set; fetch it with
//!   [`dynalg_last_error`]. Success clears the message.
//! * Complex vectors cross the boundary as interleaved doubles
//!   `[re0, im0, re1, im1, ...]`.
//! * Panics never unwind across the boundary; they surface as
//!   `DYNALG_PANIC`.
//!
//! Handles are not synchronized; share one across threads only under an
//! external lock.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use dynalg::algebra::{
    build_chain, build_su2_irrep, build_su3_symmetric_irrep, build_un_fermion_sector,
    build_un_fundamental, count_idf, tensor_sum_rep, AlgebraRep, ChainId,
};
use dynalg::coherent::{
    coherent_su2, delta, delta_min, displace, g_entanglement, reference_state, DisplacementParams,
};
use dynalg::experiment::{classify_line, plan_invocation, ExperimentConfig};
use dynalg::linalg::{C64, CVec};
use dynalg::{Error, Result, StateVector};

/// Status codes returned by every fallible entry point.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynalgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    NumericalDrift = 3,
    Panic = 4,
}

/// Opaque handle to an irreducible representation.
pub struct DynalgRep {
    rep: AlgebraRep,
}

/// Opaque handle to a normalized state vector.
pub struct DynalgState {
    state: StateVector,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Clear the error slot, run the body, and turn panics into `Panic`.
fn wrap(body: impl FnOnce() -> i32) -> i32 {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic payload".into());
            set_error(&format!("internal panic: {msg}"));
            DynalgStatus::Panic as i32
        }
    }
}

fn fail(status: DynalgStatus, msg: impl AsRef<str>) -> i32 {
    set_error(msg.as_ref());
    status as i32
}

fn fail_null(what: &str) -> i32 {
    fail(DynalgStatus::NullArgument, format!("{what} must not be null"))
}

fn fail_err(e: &Error) -> i32 {
    let status = match e.exit_code() {
        3 => DynalgStatus::NumericalDrift,
        _ => DynalgStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

unsafe fn finish_rep(out: *mut *mut DynalgRep, result: Result<AlgebraRep>) -> i32 {
    match result {
        Ok(rep) => {
            *out = Box::into_raw(Box::new(DynalgRep { rep }));
            DynalgStatus::Ok as i32
        }
        Err(e) => fail_err(&e),
    }
}

unsafe fn finish_state(out: *mut *mut DynalgState, result: Result<StateVector>) -> i32 {
    match result {
        Ok(state) => {
            *out = Box::into_raw(Box::new(DynalgState { state }));
            DynalgStatus::Ok as i32
        }
        Err(e) => fail_err(&e),
    }
}

unsafe fn finish_f64(out: *mut f64, result: Result<f64>) -> i32 {
    match result {
        Ok(x) => {
            *out = x;
            DynalgStatus::Ok as i32
        }
        Err(e) => fail_err(&e),
    }
}

/// Read `2 * count` doubles as `count` complex numbers.
unsafe fn read_complex(ptr: *const f64, count: usize) -> Vec<C64> {
    std::slice::from_raw_parts(ptr, 2 * count)
        .chunks_exact(2)
        .map(|c| C64::new(c[0], c[1]))
        .collect()
}

/// Spin-j irrep of su(2); `two_j` is 2j and must be at least 1.
///
/// # Safety
/// `out` must be a valid pointer; on `Ok` it receives a handle owned by the
/// caller (release with [`dynalg_rep_free`]).
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_su2(two_j: u32, out: *mut *mut DynalgRep) -> i32 {
    wrap(|| {
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_rep(out, build_su2_irrep(two_j)) }
    })
}

/// Symmetric irrep (N, 0) of su(3) on N bosons in three modes; `n_bosons ≥ 1`.
///
/// # Safety
/// Same contract as [`dynalg_rep_su2`].
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_su3_symmetric(n_bosons: u32, out: *mut *mut DynalgRep) -> i32 {
    wrap(|| {
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_rep(out, build_su3_symmetric_irrep(n_bosons)) }
    })
}

/// Fundamental (defining) irrep of u(N); `n_modes ≥ 2`.
///
/// # Safety
/// Same contract as [`dynalg_rep_su2`].
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_un_fundamental(n_modes: u32, out: *mut *mut DynalgRep) -> i32 {
    wrap(|| {
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_rep(out, build_un_fundamental(n_modes)) }
    })
}

/// k-particle fermionic sector of u(N); needs `n_modes ≥ 2` and
/// `1 ≤ n_particles < n_modes`.
///
/// # Safety
/// Same contract as [`dynalg_rep_su2`].
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_un_fermion(
    n_modes: u32,
    n_particles: u32,
    out: *mut *mut DynalgRep,
) -> i32 {
    wrap(|| {
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_rep(out, build_un_fermion_sector(n_modes, n_particles)) }
    })
}

/// Two independent spins, su(2) ⊕ su(2) acting on the tensor product.
///
/// # Safety
/// Same contract as [`dynalg_rep_su2`].
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_spin_pair(
    two_j1: u32,
    two_j2: u32,
    out: *mut *mut DynalgRep,
) -> i32 {
    wrap(|| {
        if out.is_null() {
            return fail_null("out");
        }
        let build = || {
            let r1 = build_su2_irrep(two_j1)?;
            let r2 = build_su2_irrep(two_j2)?;
            tensor_sum_rep(&[&r1, &r2])
        };
        unsafe { finish_rep(out, build()) }
    })
}

/// Release a representation handle. Null is a no-op.
///
/// # Safety
/// `rep` must be null or a live handle from a `dynalg_rep_*` constructor, not
/// freed before and not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_free(rep: *mut DynalgRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Hilbert-space dimension, or 0 if `rep` is null.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_dim(rep: *const DynalgRep) -> usize {
    rep.as_ref().map_or(0, |r| r.rep.dim_hilbert())
}

/// Number of orthonormal Hermitian generators, or 0 if `rep` is null.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_generator_count(rep: *const DynalgRep) -> usize {
    rep.as_ref().map_or(0, |r| r.rep.generators().len())
}

/// Number of coset ladder pairs used by displacement, or 0 if `rep` is null.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dynalg_rep_ladder_count(rep: *const DynalgRep) -> usize {
    rep.as_ref().map_or(0, |r| r.rep.ladder_pairs().len())
}

/// Extremal-weight reference state of the representation.
///
/// # Safety
/// `rep` must be a live handle; `out` must be valid and on `Ok` receives a
/// handle owned by the caller (release with [`dynalg_state_free`]).
#[no_mangle]
pub unsafe extern "C" fn dynalg_state_reference(
    rep: *const DynalgRep,
    out: *mut *mut DynalgState,
) -> i32 {
    wrap(|| {
        let Some(r) = (unsafe { rep.as_ref() }) else {
            return fail_null("rep");
        };
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_state(out, reference_state(&r.rep)) }
    })
}

/// su(2) coherent state at Bloch angles (θ, φ). Only valid for single-spin
/// representations.
///
/// # Safety
/// Same contract as [`dynalg_state_reference`].
#[no_mangle]
pub unsafe extern "C" fn dynalg_state_coherent_su2(
    rep: *const DynalgRep,
    theta: f64,
    phi: f64,
    out: *mut *mut DynalgState,
) -> i32 {
    wrap(|| {
        let Some(r) = (unsafe { rep.as_ref() }) else {
            return fail_null("rep");
        };
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_state(out, coherent_su2(&r.rep, theta, phi)) }
    })
}

/// Displace the reference state: exp(Σ αᵢ·Eᵢ⁺ − ᾱᵢ·Eᵢ⁻)|ref⟩. `alphas_re_im`
/// holds `n_pairs` interleaved complex parameters; `n_pairs` must equal
/// [`dynalg_rep_ladder_count`].
///
/// # Safety
/// `alphas_re_im` must point to `2 * n_pairs` readable doubles; otherwise
/// same contract as [`dynalg_state_reference`].
#[no_mangle]
pub unsafe extern "C" fn dynalg_state_displace(
    rep: *const DynalgRep,
    alphas_re_im: *const f64,
    n_pairs: usize,
    out: *mut *mut DynalgState,
) -> i32 {
    wrap(|| {
        let Some(r) = (unsafe { rep.as_ref() }) else {
            return fail_null("rep");
        };
        if alphas_re_im.is_null() {
            return fail_null("alphas_re_im");
        }
        if out.is_null() {
            return fail_null("out");
        }
        let alphas = unsafe { read_complex(alphas_re_im, n_pairs) };
        let params = DisplacementParams::new(alphas);
        unsafe { finish_state(out, displace(&r.rep, &params)) }
    })
}

/// Build a state from `len = 2 * dim` interleaved amplitudes. The vector must
/// already be normalized.
///
/// # Safety
/// `amps_re_im` must point to `len` readable doubles; otherwise same contract
/// as [`dynalg_state_reference`].
#[no_mangle]
pub unsafe extern "C" fn dynalg_state_from_amplitudes(
    rep: *const DynalgRep,
    amps_re_im: *const f64,
    len: usize,
    out: *mut *mut DynalgState,
) -> i32 {
    wrap(|| {
        let Some(r) = (unsafe { rep.as_ref() }) else {
            return fail_null("rep");
        };
        if amps_re_im.is_null() {
            return fail_null("amps_re_im");
        }
        if out.is_null() {
            return fail_null("out");
        }
        let dim = r.rep.dim_hilbert();
        if len != 2 * dim {
            return fail(
                DynalgStatus::InvalidArgument,
                format!("need 2*dim = {} doubles, got {len}", 2 * dim),
            );
        }
        let amps = unsafe { read_complex(amps_re_im, dim) };
        unsafe { finish_state(out, StateVector::new(CVec::from(amps))) }
    })
}

/// Copy the amplitudes out as interleaved doubles. `len` is the capacity of
/// `out_re_im` in doubles and must be at least `2 * dim`.
///
/// # Safety
/// `state` must be a live handle; `out_re_im` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn dynalg_state_amplitudes(
    state: *const DynalgState,
    out_re_im: *mut f64,
    len: usize,
) -> i32 {
    wrap(|| {
        let Some(s) = (unsafe { state.as_ref() }) else {
            return fail_null("state");
        };
        if out_re_im.is_null() {
            return fail_null("out_re_im");
        }
        let dim = s.state.dim();
        if len < 2 * dim {
            return fail(
                DynalgStatus::InvalidArgument,
                format!("buffer holds {len} doubles, need {}", 2 * dim),
            );
        }
        let buf = unsafe { std::slice::from_raw_parts_mut(out_re_im, 2 * dim) };
        for (i, z) in s.state.amplitudes().iter().enumerate() {
            buf[2 * i] = z.re;
            buf[2 * i + 1] = z.im;
        }
        DynalgStatus::Ok as i32
    })
}

/// State dimension, or 0 if `state` is null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dynalg_state_dim(state: *const DynalgState) -> usize {
    state.as_ref().map_or(0, |s| s.state.dim())
}

/// Release a state handle. Null is a no-op.
///
/// # Safety
/// `state` must be null or a live handle, not freed before and not used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn dynalg_state_free(state: *mut DynalgState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

unsafe fn checked_pair<'a>(
    rep: *const DynalgRep,
    state: *const DynalgState,
) -> std::result::Result<(&'a AlgebraRep, &'a StateVector), i32> {
    let Some(r) = rep.as_ref() else {
        return Err(fail_null("rep"));
    };
    let Some(s) = state.as_ref() else {
        return Err(fail_null("state"));
    };
    if s.state.dim() != r.rep.dim_hilbert() {
        return Err(fail(
            DynalgStatus::InvalidArgument,
            format!(
                "state dimension {} does not match rep dimension {}",
                s.state.dim(),
                r.rep.dim_hilbert()
            ),
        ));
    }
    Ok((&r.rep, &s.state))
}

/// Total fluctuation Δ(ψ) = Σᵢ (⟨Lᵢ²⟩ − ⟨Lᵢ⟩²) over the orthonormal
/// generators.
///
/// # Safety
/// `rep` and `state` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dynalg_delta(
    rep: *const DynalgRep,
    state: *const DynalgState,
    out: *mut f64,
) -> i32 {
    wrap(|| {
        let (r, s) = match unsafe { checked_pair(rep, state) } {
            Ok(pair) => pair,
            Err(code) => return code,
        };
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_f64(out, delta(r, s)) }
    })
}

/// Minimal Δ over pure states, attained exactly on the coherent orbit.
///
/// # Safety
/// `rep` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dynalg_delta_min(rep: *const DynalgRep, out: *mut f64) -> i32 {
    wrap(|| {
        let Some(r) = (unsafe { rep.as_ref() }) else {
            return fail_null("rep");
        };
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_f64(out, delta_min(&r.rep)) }
    })
}

/// Generalized entanglement max(Δ(ψ) − Δ_min, 0).
///
/// # Safety
/// Same contract as [`dynalg_delta`].
#[no_mangle]
pub unsafe extern "C" fn dynalg_g_entanglement(
    rep: *const DynalgRep,
    state: *const DynalgState,
    out: *mut f64,
) -> i32 {
    wrap(|| {
        let (r, s) = match unsafe { checked_pair(rep, state) } {
            Ok(pair) => pair,
            Err(code) => return code,
        };
        if out.is_null() {
            return fail_null("out");
        }
        unsafe { finish_f64(out, g_entanglement(r, s)) }
    })
}

/// Number of independent degrees of freedom counted along the named CSCO
/// chain (for example "su2-Jz" or "uN-tower").
///
/// # Safety
/// `rep` must be a live handle; `chain_id` must be a NUL-terminated string;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dynalg_idf(
    rep: *const DynalgRep,
    chain_id: *const c_char,
    out: *mut usize,
) -> i32 {
    wrap(|| {
        let Some(r) = (unsafe { rep.as_ref() }) else {
            return fail_null("rep");
        };
        if chain_id.is_null() {
            return fail_null("chain_id");
        }
        if out.is_null() {
            return fail_null("out");
        }
        let text = match unsafe { CStr::from_ptr(chain_id) }.to_str() {
            Ok(t) => t,
            Err(_) => return fail(DynalgStatus::InvalidArgument, "chain_id is not valid UTF-8"),
        };
        let counted = ChainId::from_str(text)
            .and_then(|id| build_chain(&r.rep, id))
            .and_then(|chain| count_idf(&r.rep, &chain));
        match counted {
            Ok(n) => {
                unsafe { *out = n };
                DynalgStatus::Ok as i32
            }
            Err(e) => fail_err(&e),
        }
    })
}

/// Classify the runs described by an experiment config given as JSON text.
/// Produces the same `verdict=... reason=... residual=...` lines as the CLI,
/// one per run, joined with '\n' and prefixed with `run=<label>` when the
/// config expands to several runs. The returned string is owned by the
/// caller; release it with [`dynalg_string_free`].
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out_line` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn dynalg_classify_json(
    config_json: *const c_char,
    out_line: *mut *mut c_char,
) -> i32 {
    wrap(|| {
        if config_json.is_null() {
            return fail_null("config_json");
        }
        if out_line.is_null() {
            return fail_null("out_line");
        }
        let text = match unsafe { CStr::from_ptr(config_json) }.to_str() {
            Ok(t) => t,
            Err(_) => {
                return fail(
                    DynalgStatus::InvalidArgument,
                    "config_json is not valid UTF-8",
                )
            }
        };
        let classified = (|| -> Result<String> {
            let config = ExperimentConfig::from_json(text)?;
            let plans = plan_invocation(&config, &[], &[])?;
            let multi = plans.len() > 1;
            let mut lines = Vec::with_capacity(plans.len());
            for plan in &plans {
                let verdict = plan.resolve()?.classify()?;
                let line = classify_line(&verdict);
                lines.push(if multi {
                    format!("run={} {line}", plan.label)
                } else {
                    line
                });
            }
            Ok(lines.join("\n"))
        })();
        match classified {
            Ok(report) => {
                let owned = CString::new(report.replace('\0', " ")).unwrap_or_default();
                unsafe { *out_line = owned.into_raw() };
                DynalgStatus::Ok as i32
            }
            Err(e) => fail_err(&e),
        }
    })
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer returned by [`dynalg_classify_json`], not
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn dynalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on the calling thread, or null if the
/// last call succeeded. The pointer stays valid until the next library call
/// on the same thread.
#[no_mangle]
pub extern "C" fn dynalg_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

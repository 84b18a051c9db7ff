//! C ABI for `spa-realign`.
//!
//! Every fallible function returns an [`SrStatus`] and writes its result
//! through an out-pointer. On failure a human-readable message is kept per
//! thread and can be fetched with [`sr_last_error_message`]. States live
//! behind the opaque [`SrState`] handle and must be released with
//! [`sr_state_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use spa_realign::criteria::analyze_realigned;
use spa_realign::estimation::{m1_case_bounds, m1_interval_quadratic, simulate_s, CaseTag};
use spa_realign::io::parse_state;
use spa_realign::realign::realign;
use spa_realign::spa::{spa_threshold, Definiteness};
use spa_realign::{
    validate_density, ComplexMatrix, DensityMatrix, Error, EstimationInput, MomentInterval,
    RealignedMatrix, StateFamily, Tolerances,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was malformed or out of range.
    InvalidArgument = 2,
    /// The matrix is not a valid density matrix.
    InvalidState = 3,
    /// The state is outside the domain where the SPA-R threshold is defined.
    Domain = 4,
    /// Moment-estimation inputs admit no interval.
    Estimation = 5,
    /// An eigenvalue iteration failed to converge.
    NoConvergence = 6,
    /// Internal panic caught at the boundary.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrFamily {
    RhoT = 0,
    RhoA = 1,
    Isotropic = 2,
    AlphaState = 3,
}

impl From<SrFamily> for StateFamily {
    fn from(f: SrFamily) -> Self {
        match f {
            SrFamily::RhoT => StateFamily::RhoT,
            SrFamily::RhoA => StateFamily::RhoA,
            SrFamily::Isotropic => StateFamily::Isotropic,
            SrFamily::AlphaState => StateFamily::AlphaState,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrCaseTag {
    Quadratic = 0,
    Case1 = 1,
    Case2 = 2,
}

/// Threshold data of the SPA-R map.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SrSpaThreshold {
    pub d: usize,
    pub trace_r: f64,
    pub lower_bound: f64,
    pub k: f64,
    pub l: f64,
    /// Whether the moment sign test certifies `R(rho)` positive semidefinite.
    pub psd: bool,
}

/// Criterion report at one mixing probability.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SrReport {
    pub p: f64,
    pub trace_norm_spa_r: f64,
    pub upper_bound: f64,
    pub spa_r_entangled: bool,
    pub error_norm: f64,
    pub error_bound_general: f64,
    pub error_bound_separable: f64,
    pub error_entangled: bool,
    pub q1: f64,
    /// NaN when undefined.
    pub q2: f64,
    pub realignment_score: f64,
    pub realignment_entangled: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrInterval {
    pub lower: f64,
    pub upper: f64,
    pub case_tag: SrCaseTag,
}

impl From<MomentInterval> for SrInterval {
    fn from(m: MomentInterval) -> Self {
        Self {
            lower: m.lower,
            upper: m.upper,
            case_tag: match m.case_tag {
                CaseTag::Quadratic => SrCaseTag::Quadratic,
                CaseTag::Case1 => SrCaseTag::Case1,
                CaseTag::Case2 => SrCaseTag::Case2,
            },
        }
    }
}

/// Opaque handle to a validated bipartite state and its realignment.
pub struct SrState {
    rho: DensityMatrix,
    r: RealignedMatrix,
}

impl SrState {
    fn new(rho: DensityMatrix) -> Self {
        let r = realign(&rho);
        Self { rho, r }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SrStatus {
    match err {
        Error::Shape { .. }
        | Error::NonFinite { .. }
        | Error::NotSquare { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotHermitian { .. }
        | Error::Trace { .. }
        | Error::NotPositive { .. }
        | Error::StateFile(_) => SrStatus::InvalidState,
        Error::OutOfRange { .. } => SrStatus::InvalidArgument,
        Error::Domain(_) | Error::DomainInconsistent { .. } => SrStatus::Domain,
        Error::Estimation(_) => SrStatus::Estimation,
        Error::NoConvergence { .. } => SrStatus::NoConvergence,
    }
}

struct Failure(SrStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SrStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any failure and converts it into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SrStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".into());
            set_error(message);
            SrStatus::Internal
        }
    }
}

/// # Safety
/// `state` must be null or a live handle.
unsafe fn state_ref<'a>(state: *const SrState) -> Result<&'a SrState, Failure> {
    state.as_ref().ok_or_else(|| null("state"))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn handle(rho: DensityMatrix) -> *mut SrState {
    Box::into_raw(Box::new(SrState::new(rho)))
}

/// Builds a member of a named family. `dim` is used by the isotropic family
/// and ignored otherwise.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_state_from_family(
    family: SrFamily,
    param: f64,
    dim: usize,
    out: *mut *mut SrState,
) -> SrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let rho = StateFamily::from(family).build(param, dim)?;
        write(out, handle(rho))
    })
}

/// Builds a state from `2 * n * n` doubles, `n = dim_a * dim_b`, holding
/// `(re, im)` pairs in row-major order.
///
/// # Safety
/// `entries` must point to `len` readable doubles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn sr_state_from_entries(
    dim_a: usize,
    dim_b: usize,
    entries: *const f64,
    len: usize,
    out: *mut *mut SrState,
) -> SrStatus {
    guard(|| {
        if entries.is_null() {
            return Err(null("entries"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let n = dim_a
            .checked_mul(dim_b)
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure(SrStatus::InvalidArgument, "invalid dimensions".into()))?;
        if n.checked_mul(n).and_then(|m| m.checked_mul(2)) != Some(len) {
            return Err(Failure(
                SrStatus::InvalidArgument,
                format!("dims {dim_a}x{dim_b} need {} doubles, got {len}", 2 * n * n),
            ));
        }
        let raw = std::slice::from_raw_parts(entries, len);
        let data = raw
            .chunks_exact(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        let m = ComplexMatrix::new(n, n, data)?;
        let rho = validate_density(m, (dim_a, dim_b), Tolerances::DEFAULT.validation)?;
        write(out, handle(rho))
    })
}

/// Parses a state file document (NUL-terminated UTF-8 JSON).
///
/// # Safety
/// `json` must be a valid C string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_state_from_json(
    json: *const c_char,
    out: *mut *mut SrState,
) -> SrStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(SrStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        write(out, handle(parse_state(text)?))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_state_free(state: *mut SrState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_state_dims(
    state: *const SrState,
    dim_a: *mut usize,
    dim_b: *mut usize,
) -> SrStatus {
    guard(|| {
        let (a, b) = state_ref(state)?.rho.dims();
        if dim_a.is_null() || dim_b.is_null() {
            return Err(null("output pointer"));
        }
        write(dim_a, a)?;
        write(dim_b, b)
    })
}

/// `||R(rho)||_1`.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_realignment_norm(state: *const SrState, out: *mut f64) -> SrStatus {
    guard(|| {
        let s = state_ref(state)?;
        write(out, s.r.trace_norm())
    })
}

/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_spa_threshold(
    state: *const SrState,
    out: *mut SrSpaThreshold,
) -> SrStatus {
    guard(|| {
        let t = spa_threshold(&state_ref(state)?.r)?;
        write(
            out,
            SrSpaThreshold {
                d: t.d,
                trace_r: t.trace_r,
                lower_bound: t.lower_bound,
                k: t.k,
                l: t.l,
                psd: t.definiteness == Definiteness::Psd,
            },
        )
    })
}

/// Runs every criterion at mixing probability `p`.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_analyze(
    state: *const SrState,
    p: f64,
    tol: f64,
    out: *mut SrReport,
) -> SrStatus {
    guard(|| {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Failure(
                SrStatus::InvalidArgument,
                format!("tol = {tol} must be a nonnegative number"),
            ));
        }
        let r = analyze_realigned(&state_ref(state)?.r, p, tol)?;
        write(
            out,
            SrReport {
                p: r.p,
                trace_norm_spa_r: r.trace_norm_spa_r,
                upper_bound: r.upper_bound,
                spa_r_entangled: r.spa_r_verdict.is_entangled(),
                error_norm: r.error_norm,
                error_bound_general: r.error_bound_general,
                error_bound_separable: r.error_bound_separable,
                error_entangled: r.error_verdict.is_entangled(),
                q1: r.q1,
                q2: r.q2.unwrap_or(f64::NAN),
                realignment_score: r.realignment_score,
                realignment_entangled: r.realignment_verdict.is_entangled(),
            },
        )
    })
}

/// `s = Tr[R~ P]` with `P = SWAP/d`.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_simulate_s(state: *const SrState, p: f64, out: *mut f64) -> SrStatus {
    guard(|| {
        let s = simulate_s(&state_ref(state)?.r, p, None)?;
        write(out, s)
    })
}

/// Quadratic interval for the first moment of `R(rho)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_m1_interval_quadratic(
    s: f64,
    d: usize,
    k: f64,
    out: *mut SrInterval,
) -> SrStatus {
    guard(|| {
        let interval = m1_interval_quadratic(&EstimationInput::new(s, d, k)?)?;
        write(out, interval.into())
    })
}

/// Case-split interval for the first moment of `R(rho)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sr_m1_case_bounds(
    s: f64,
    d: usize,
    k: f64,
    out: *mut SrInterval,
) -> SrStatus {
    guard(|| {
        let interval = m1_case_bounds(&EstimationInput::new(s, d, k)?)?;
        write(out, interval.into())
    })
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn sr_status_str(status: SrStatus) -> *const c_char {
    let s: &'static CStr = match status {
        SrStatus::Ok => c"ok",
        SrStatus::NullPointer => c"null pointer",
        SrStatus::InvalidArgument => c"invalid argument",
        SrStatus::InvalidState => c"invalid state",
        SrStatus::Domain => c"outside SPA-R domain",
        SrStatus::Estimation => c"moment estimation failed",
        SrStatus::NoConvergence => c"no convergence",
        SrStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

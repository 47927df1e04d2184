//! C ABI over `meissner_lab`.
//!
//! A model is created with `ml_model_new`, queried through the `ml_model_*`
//! functions, and released with `ml_model_free`. Every fallible call returns
//! an `MlStatus`; on failure `ml_last_error_message` describes the most
//! recent error on the calling thread. No call unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use meissner_lab::{Error, LogBase, Mode, OscillatorParams, VacuumEvolution};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlStatus {
    Ok = 0,
    /// Non-finite or negative input, or an out-of-range enum/mode.
    InvalidArgument = 1,
    /// Outside the open disc `eps^2 + j0^2 < omega0_sq^2`.
    Unbounded = 2,
    /// On the disc edge: a normal frequency vanishes.
    ForbiddenPoint = 3,
    /// Argument outside the mathematical domain (e.g. negative time).
    Domain = 4,
    NonConverged = 5,
    NullPointer = 6,
    /// An internal panic was caught.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlLogBase {
    Natural = 0,
    Two = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlDilatationKind {
    /// `h_j`, normal-mode dilatation.
    Normal = 0,
    /// `nu_j`, bare-oscillator dilatation.
    Bare = 1,
}

/// Opaque handle to a precomputed parameter point.
pub struct MlModel {
    inner: VacuumEvolution,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MlStability {
    /// Stability parameter; the point is stable iff `lambda < 1`.
    pub lambda: f64,
    /// `max(1 - lambda, 0)`.
    pub s: f64,
    /// Largest Floquet multiplier modulus per period.
    pub growth_rate: f64,
    pub stable: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MlObservables {
    pub t: f64,
    pub h1: f64,
    pub h2: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub n1: f64,
    pub n2: f64,
    pub m12: f64,
    pub mu: f64,
    pub lambda_min: f64,
    pub e_n: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MlDilatation {
    pub h: f64,
    pub h_dot: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> MlStatus {
    match err {
        Error::InvalidParameter { .. } => MlStatus::InvalidArgument,
        Error::Unbounded { .. } => MlStatus::Unbounded,
        Error::ForbiddenPoint { .. } => MlStatus::ForbiddenPoint,
        Error::Domain(_) => MlStatus::Domain,
        Error::NonConverged { .. } => MlStatus::NonConverged,
    }
}

enum Failure {
    Status(MlStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(MlStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F>(f: F) -> MlStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MlStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            MlStatus::Panic
        }
    }
}

fn mode_of(mode: u32) -> Result<Mode, Failure> {
    Mode::from_number(mode).map_err(|_| {
        Failure::Status(MlStatus::InvalidArgument, format!("mode must be 1 or 2, got {mode}"))
    })
}

/// Creates a model for `(omega0_sq, epsilon, j0)` and stores it in `*out`.
///
/// On failure `*out` is set to NULL.
///
/// # Safety
/// `out` must be NULL or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ml_model_new(omega0_sq: f64, epsilon: f64, j0: f64, out: *mut *mut MlModel) -> MlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let p = OscillatorParams::admissible(omega0_sq, epsilon, j0)?;
        let model = Box::new(MlModel {
            inner: VacuumEvolution::new(&p)?,
        });
        *out = Box::into_raw(model);
        Ok(())
    })
}

/// Releases a model. NULL is ignored.
///
/// # Safety
/// `model` must be NULL or a pointer from `ml_model_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ml_model_free(model: *mut MlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle; `out` valid for one `MlStability`.
#[no_mangle]
pub unsafe extern "C" fn ml_model_stability(model: *const MlModel, out: *mut MlStability) -> MlStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = m.inner.stability();
        *out = MlStability {
            lambda: s.lambda,
            s: s.s,
            growth_rate: s.growth_rate,
            stable: s.is_stable(),
        };
        Ok(())
    })
}

/// All observables at time `t >= 0`.
///
/// # Safety
/// `model` must be a live handle; `out` valid for one `MlObservables`.
#[no_mangle]
pub unsafe extern "C" fn ml_model_observables(
    model: *const MlModel,
    t: f64,
    base: MlLogBase,
    out: *mut MlObservables,
) -> MlStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = observe(m, t, base)?;
        Ok(())
    })
}

/// Observables at `n` times; `out` receives `n` records.
///
/// # Safety
/// `model` must be a live handle; `times` readable and `out` writable for `n` elements.
#[no_mangle]
pub unsafe extern "C" fn ml_model_observables_series(
    model: *const MlModel,
    times: *const f64,
    n: usize,
    base: MlLogBase,
    out: *mut MlObservables,
) -> MlStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if n == 0 {
            return Ok(());
        }
        if times.is_null() {
            return Err(null("times"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let times = std::slice::from_raw_parts(times, n);
        let out = std::slice::from_raw_parts_mut(out, n);
        for (slot, &t) in out.iter_mut().zip(times) {
            *slot = observe(m, t, base)?;
        }
        Ok(())
    })
}

fn observe(m: &MlModel, t: f64, base: MlLogBase) -> Result<MlObservables, Failure> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Failure::Status(
            MlStatus::Domain,
            format!("time must be finite and non-negative, got {t}"),
        ));
    }
    let base = match base {
        MlLogBase::Natural => LogBase::Natural,
        MlLogBase::Two => LogBase::Two,
    };
    let r = m.inner.record(t, base)?;
    Ok(MlObservables {
        t: r.t,
        h1: r.h1,
        h2: r.h2,
        nu1: r.nu1,
        nu2: r.nu2,
        n1: r.n1,
        n2: r.n2,
        m12: r.m12,
        mu: r.mu,
        lambda_min: r.lambda_min,
        e_n: r.e_n,
    })
}

/// Dilatation `h_j` (normal) or `nu_j` (bare) of mode `mode` (1 or 2) at `t`.
///
/// # Safety
/// `model` must be a live handle; `out` valid for one `MlDilatation`.
#[no_mangle]
pub unsafe extern "C" fn ml_model_dilatation(
    model: *const MlModel,
    kind: MlDilatationKind,
    mode: u32,
    t: f64,
    out: *mut MlDilatation,
) -> MlStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let mode = mode_of(mode)?;
        let set = m.inner.dilatations();
        let s = match kind {
            MlDilatationKind::Normal => set.h(mode, t)?,
            MlDilatationKind::Bare => set.nu(mode, t)?,
        };
        *out = MlDilatation { h: s.h, h_dot: s.h_dot };
        Ok(())
    })
}

/// Message of the last failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ml_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ml_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

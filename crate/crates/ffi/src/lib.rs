//! C ABI for the `gma` library.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`GmaStatus`]. Codes 0..=5 match the
//!   exit codes of the `gma` command-line tool; higher codes are specific to
//!   the C boundary.
//! * Objects are opaque handles created by `*_new`/`gma_run_json` and released
//!   with the matching `*_free`; passing NULL to a `*_free` is a no-op.
//! * After a non-OK status, [`gma_last_error`] returns a message for the
//!   calling thread. The pointer stays valid until the next call into this
//!   library on the same thread.
//! * Strings returned by [`gma_report_json`] are owned by the report handle.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use gma::cli::{self, ExitStatus, Outcome};
use gma::dhym::{oracle_ck, PhaseSpec};
use gma::equation::{cone_margins_unchecked, to_gamma, Convention, GammaCoefficients};
use gma::symfun::sigma_all;
use gma::torus::{
    continuity_solve, Background, ContinuationOptions, NewtonOptions, PotentialGrid, SolveReport,
    SolverError, TorusGrid,
};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmaStatus {
    Ok = 0,
    Malformed = 1,
    InadmissiblePhase = 2,
    ContinuationStuck = 3,
    Fail = 4,
    Boundary = 5,
    NullPointer = 10,
    InvalidUtf8 = 11,
    BufferTooSmall = 12,
    UnknownCommand = 13,
    Panic = 14,
}

impl From<ExitStatus> for GmaStatus {
    fn from(s: ExitStatus) -> Self {
        match s {
            ExitStatus::Success => GmaStatus::Ok,
            ExitStatus::Malformed => GmaStatus::Malformed,
            ExitStatus::InadmissiblePhase => GmaStatus::InadmissiblePhase,
            ExitStatus::ContinuationStuck => GmaStatus::ContinuationStuck,
            ExitStatus::Fail => GmaStatus::Fail,
            ExitStatus::Boundary => GmaStatus::Boundary,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: GmaStatus, msg: impl Into<String>) -> GmaStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting panics into [`GmaStatus::Panic`].
fn guard<F: FnOnce() -> GmaStatus>(f: F) -> GmaStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(GmaStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, GmaStatus> {
    if p.is_null() {
        return Err(fail(GmaStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(GmaStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn read_slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], GmaStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(GmaStatus::NullPointer, "null array argument"));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn write_slice(p: *mut f64, cap: usize, values: &[f64]) -> GmaStatus {
    if cap < values.len() {
        return fail(
            GmaStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", values.len()),
        );
    }
    if values.is_empty() {
        return GmaStatus::Ok;
    }
    if p.is_null() {
        return fail(GmaStatus::NullPointer, "null output buffer");
    }
    ptr::copy_nonoverlapping(values.as_ptr(), p, values.len());
    GmaStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gma_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last non-OK status on this thread, or NULL.
#[no_mangle]
pub extern "C" fn gma_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// dHYM coefficients `c_0..c_{n-1}` and the leading coefficient `kappa`.
///
/// `out_c` must hold at least `n` values; `out_kappa` may be NULL.
///
/// # Safety
/// `out_c` must be valid for `out_len` writes and `out_kappa` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn gma_dhym_coefficients(
    n: usize,
    theta_hat: f64,
    out_c: *mut f64,
    out_len: usize,
    out_kappa: *mut f64,
) -> GmaStatus {
    guard(|| {
        let d = match PhaseSpec::new(n, theta_hat).and_then(|s| oracle_ck(&s)) {
            Ok(d) => d,
            Err(e) => return fail(GmaStatus::InadmissiblePhase, e.to_string()),
        };
        let s = write_slice(out_c, out_len, &d.c);
        if s == GmaStatus::Ok && !out_kappa.is_null() {
            *out_kappa = d.kappa;
        }
        s
    })
}

/// `σ_0..σ_n` of `lambda[0..n]`; `out` must hold `n + 1` values.
///
/// # Safety
/// `lambda` must be valid for `n` reads and `out` for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn gma_sigma(
    lambda: *const f64,
    n: usize,
    out: *mut f64,
    out_len: usize,
) -> GmaStatus {
    guard(|| {
        let lam = match read_slice(lambda, n) {
            Ok(l) => l,
            Err(s) => return s,
        };
        write_slice(out, out_len, &sigma_all(lam))
    })
}

/// Cone margins of the canonical equation `σ_n = Σ γ_k σ_k` at `lambda`.
/// Returns [`GmaStatus::Fail`] if some margin is not positive; the margins
/// are written either way.
///
/// # Safety
/// `lambda` and `gamma` must be valid for `n` reads and `out` for `out_len`
/// writes.
#[no_mangle]
pub unsafe extern "C" fn gma_cone_margins(
    lambda: *const f64,
    gamma: *const f64,
    n: usize,
    out: *mut f64,
    out_len: usize,
) -> GmaStatus {
    guard(|| {
        let (lam, g) = match (read_slice(lambda, n), read_slice(gamma, n)) {
            (Ok(l), Ok(g)) => (l, g),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let m = cone_margins_unchecked(lam, g);
        let s = write_slice(out, out_len, &m);
        if s == GmaStatus::Ok && !m.iter().all(|&x| x > 0.0) {
            return fail(GmaStatus::Fail, "cone condition violated");
        }
        s
    })
}

/// Report of a command run through the JSON interface.
pub struct GmaReport {
    json: CString,
    status: GmaStatus,
}

/// Runs `command` (`"coeffs"`, `"check-cone"`, `"solve"` or `"toric"`) on a
/// JSON configuration and stores the report in `*out`.
///
/// The returned status is the command's verdict; a report is produced for
/// every status below 10.
///
/// # Safety
/// `command` and `config` must be NUL-terminated strings and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gma_run_json(
    command: *const c_char,
    config: *const c_char,
    out: *mut *mut GmaReport,
) -> GmaStatus {
    guard(|| {
        if out.is_null() {
            return fail(GmaStatus::NullPointer, "null report pointer");
        }
        *out = ptr::null_mut();
        let (cmd, cfg) = match (read_str(command), read_str(config)) {
            (Ok(c), Ok(g)) => (c, g),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let outcome: Outcome = match cmd {
            "coeffs" => cli::run_coeffs_json(cfg),
            "check-cone" => cli::run_check_cone_json(cfg),
            "solve" => cli::run_solve_json(cfg, None::<&Path>),
            "toric" => cli::run_toric_json(cfg),
            other => return fail(GmaStatus::UnknownCommand, format!("unknown command `{other}`")),
        };
        let status = GmaStatus::from(outcome.status);
        if let Some(e) = outcome.report.get("error").and_then(|e| e.as_str()) {
            set_error(e);
        }
        let json = CString::new(outcome.to_json()).expect("JSON has no NUL bytes");
        *out = Box::into_raw(Box::new(GmaReport { json, status }));
        status
    })
}

/// The report as a NUL-terminated JSON string owned by `report`.
///
/// # Safety
/// `report` must be NULL or a live handle from [`gma_run_json`].
#[no_mangle]
pub unsafe extern "C" fn gma_report_json(report: *const GmaReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// The verdict stored in `report`.
///
/// # Safety
/// `report` must be NULL or a live handle from [`gma_run_json`].
#[no_mangle]
pub unsafe extern "C" fn gma_report_status(report: *const GmaReport) -> GmaStatus {
    report.as_ref().map_or(GmaStatus::NullPointer, |r| r.status)
}

/// # Safety
/// `report` must be NULL or a handle from [`gma_run_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gma_report_free(report: *mut GmaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Flat-torus problem `σ_n(Ω + i∂∂̄φ) = Σ γ_k σ_k` with `Ω = s·ω` and
/// constant canonical `γ`.
pub struct GmaSolver {
    grid: TorusGrid,
    background: Background,
    gamma: GammaCoefficients,
    phi: Option<PotentialGrid>,
    report: Option<SolveReport>,
}

/// Creates a solver on the `n`-dimensional torus with `grid_size` points per
/// real axis. `gamma` holds `n` canonical coefficients.
///
/// # Safety
/// `gamma` must be valid for `gamma_len` reads and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gma_solver_new(
    n: usize,
    grid_size: usize,
    background_scale: f64,
    gamma: *const f64,
    gamma_len: usize,
    out: *mut *mut GmaSolver,
) -> GmaStatus {
    guard(|| {
        if out.is_null() {
            return fail(GmaStatus::NullPointer, "null solver pointer");
        }
        *out = ptr::null_mut();
        let g = match read_slice(gamma, gamma_len) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let built = (|| -> Result<GmaSolver, String> {
            let grid = TorusGrid::new(n, grid_size).map_err(|e| e.to_string())?;
            let background =
                Background::scaled_identity(n, background_scale).map_err(|e| e.to_string())?;
            let gamma = to_gamma(g, Convention::Direct, n).map_err(|e| e.to_string())?;
            Ok(GmaSolver {
                grid,
                background,
                gamma,
                phi: None,
                report: None,
            })
        })();
        match built {
            Ok(s) => {
                *out = Box::into_raw(Box::new(s));
                GmaStatus::Ok
            }
            Err(e) => fail(GmaStatus::Malformed, e),
        }
    })
}

/// Runs the continuity method with `steps` initial τ-steps. `tol <= 0`
/// selects the default tolerance. On [`GmaStatus::ContinuationStuck`] the
/// last accepted potential is kept.
///
/// # Safety
/// `solver` must be a live handle from [`gma_solver_new`].
#[no_mangle]
pub unsafe extern "C" fn gma_solver_solve(solver: *mut GmaSolver, steps: usize, tol: f64) -> GmaStatus {
    guard(|| {
        let Some(s) = solver.as_mut() else {
            return fail(GmaStatus::NullPointer, "null solver");
        };
        let tol = if tol > 0.0 {
            tol
        } else {
            NewtonOptions::default_tol(s.grid.n())
        };
        let opts = ContinuationOptions::new(steps, tol);
        match continuity_solve(&s.grid, &s.background, &s.gamma, &opts, None) {
            Ok((phi, report)) => {
                s.phi = Some(phi);
                s.report = Some(report);
                GmaStatus::Ok
            }
            Err(SolverError::StepUnderflow {
                last_tau,
                phi,
                report,
            }) => {
                s.phi = Some(*phi);
                s.report = Some(*report);
                fail(
                    GmaStatus::ContinuationStuck,
                    format!("continuation stuck after tau = {last_tau}"),
                )
            }
            Err(e) if e.is_corrector_failure() => fail(GmaStatus::ContinuationStuck, e.to_string()),
            Err(e) => fail(GmaStatus::Malformed, e.to_string()),
        }
    })
}

/// Number of grid points, `grid_size^(2n)`.
///
/// # Safety
/// `solver` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gma_solver_len(solver: *const GmaSolver) -> usize {
    solver.as_ref().map_or(0, |s| s.grid.len())
}

/// Copies the current potential (mean zero, last axis fastest) into `out`.
///
/// # Safety
/// `solver` must be a live handle and `out` valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn gma_solver_copy_phi(
    solver: *const GmaSolver,
    out: *mut f64,
    out_len: usize,
) -> GmaStatus {
    guard(|| {
        let Some(s) = solver.as_ref() else {
            return fail(GmaStatus::NullPointer, "null solver");
        };
        match &s.phi {
            Some(phi) => write_slice(out, out_len, phi.values()),
            None => fail(GmaStatus::Malformed, "no potential yet; call gma_solver_solve"),
        }
    })
}

/// Sup-norm residual and minimum cone margin of the current potential.
///
/// # Safety
/// `solver` must be a live handle; the output pointers may be NULL.
#[no_mangle]
pub unsafe extern "C" fn gma_solver_diagnostics(
    solver: *const GmaSolver,
    residual_sup: *mut f64,
    cone_margin_min: *mut f64,
) -> GmaStatus {
    guard(|| {
        let Some(s) = solver.as_ref() else {
            return fail(GmaStatus::NullPointer, "null solver");
        };
        let Some(r) = &s.report else {
            return fail(GmaStatus::Malformed, "no report yet; call gma_solver_solve");
        };
        if !residual_sup.is_null() {
            *residual_sup = r.residual_sup;
        }
        if !cone_margin_min.is_null() {
            *cone_margin_min = r.cone_margin_min;
        }
        GmaStatus::Ok
    })
}

/// # Safety
/// `solver` must be NULL or a handle from [`gma_solver_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gma_solver_free(solver: *mut GmaSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

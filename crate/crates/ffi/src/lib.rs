//! C ABI for the `cnpf` library.
//!
//! Every fallible function returns a [`CnpfStatus`]. On failure the message is
//! kept per thread and read with [`cnpf_last_error`]. Handles are opaque and
//! released with their `_free` function; passing null to a `_free` is a no-op.

use cnpf::cli::config::RunConfig;
use cnpf::cli::{run, Command, RunOutput};
use cnpf::kernel::{cnp_row_function, KernelSpec};
use cnpf::Error;
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnpfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    InvalidArgument = 4,
    OutsideDomain = 5,
    NotCnp = 6,
    Numeric = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for CnpfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Config(_) => CnpfStatus::Config,
            Error::PointOutsideDomain(_) => CnpfStatus::OutsideDomain,
            Error::NotCnp { .. } | Error::NoCnpFactor { .. } => CnpfStatus::NotCnp,
            Error::Io(_) => CnpfStatus::Io,
            Error::UnsupportedFamily(_)
            | Error::NonNormalized(_)
            | Error::DimensionMismatch { .. }
            | Error::OrderMismatch(..)
            | Error::NotUnivariate
            | Error::AlphaOutOfRange(_)
            | Error::InvalidArgument(_) => CnpfStatus::InvalidArgument,
            _ => CnpfStatus::Numeric,
        }
    }
}

/// A kernel specification.
pub struct CnpfKernel {
    spec: KernelSpec,
}

/// The outcome of a command run.
pub struct CnpfRun {
    output: RunOutput,
    report: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CnpfStatus, msg: impl Into<String>) -> CnpfStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> CnpfStatus) -> CnpfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CnpfStatus::Panic, "internal panic"),
    }
}

fn from_error(e: Error) -> CnpfStatus {
    let status = CnpfStatus::from(&e);
    fail(status, e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, CnpfStatus> {
    if p.is_null() {
        return Err(fail(CnpfStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CnpfStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, CnpfStatus> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(Some)
    }
}

unsafe fn points(p: *const f64, dim: usize, name: &str) -> Result<Vec<Complex64>, CnpfStatus> {
    if p.is_null() {
        return Err(fail(CnpfStatus::NullPointer, format!("{name} is null")));
    }
    let raw = std::slice::from_raw_parts(p, 2 * dim);
    Ok(raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn cnpf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Valid until the next call into the library.
#[no_mangle]
pub extern "C" fn cnpf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a kernel from JSON, e.g. `{"family": "dirichlet_alpha", "params": {"alpha": 0.5}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cnpf_kernel_from_json(json: *const c_char, out: *mut *mut CnpfKernel) -> CnpfStatus {
    guard(|| {
        if out.is_null() {
            return fail(CnpfStatus::NullPointer, "out is null");
        }
        let text = tri!(str_arg(json, "json"));
        let spec: KernelSpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => return fail(CnpfStatus::Config, e.to_string()),
        };
        *out = Box::into_raw(Box::new(CnpfKernel { spec }));
        CnpfStatus::Ok
    })
}

/// Number of variables, 0 for a null handle.
///
/// # Safety
/// `kernel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cnpf_kernel_dimension(kernel: *const CnpfKernel) -> usize {
    kernel.as_ref().map_or(0, |k| k.spec.dimension)
}

/// Evaluates `k(z, w)`. Points are `dim` interleaved `(re, im)` pairs; `out` receives `(re, im)`.
///
/// # Safety
/// `z` and `w` must hold `2 * dim` doubles and `out` two.
#[no_mangle]
pub unsafe extern "C" fn cnpf_kernel_eval(
    kernel: *const CnpfKernel,
    z: *const f64,
    w: *const f64,
    dim: usize,
    out: *mut f64,
) -> CnpfStatus {
    guard(|| {
        let Some(k) = kernel.as_ref() else {
            return fail(CnpfStatus::NullPointer, "kernel is null");
        };
        if out.is_null() {
            return fail(CnpfStatus::NullPointer, "out is null");
        }
        let z = tri!(points(z, dim, "z"));
        let w = tri!(points(w, dim, "w"));
        match k.spec.eval(&z, &w) {
            Ok(v) => {
                *out = v.re;
                *out.add(1) = v.im;
                CnpfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Tests the CNP property up to `order`. A kernel that is not CNP is reported
/// through `is_cnp`, not as a failure; the offending index goes to the error message.
///
/// # Safety
/// `kernel` must be a live handle and `is_cnp` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cnpf_kernel_is_cnp(
    kernel: *const CnpfKernel,
    order: usize,
    tol: f64,
    is_cnp: *mut bool,
) -> CnpfStatus {
    guard(|| {
        let Some(k) = kernel.as_ref() else {
            return fail(CnpfStatus::NullPointer, "kernel is null");
        };
        if is_cnp.is_null() {
            return fail(CnpfStatus::NullPointer, "is_cnp is null");
        }
        match cnp_row_function(&k.spec, order, tol) {
            Ok(_) => {
                *is_cnp = true;
                CnpfStatus::Ok
            }
            Err(e @ Error::NotCnp { .. }) => {
                *is_cnp = false;
                set_error(e.to_string());
                CnpfStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `kernel` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cnpf_kernel_free(kernel: *mut CnpfKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Runs `kernel`, `factorize`, `sarason`, `dirichlet` or `carleson` on a JSON
/// config. Either `config_json` or `preset` may be null.
///
/// # Safety
/// Non-null strings must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cnpf_run(
    command: *const c_char,
    config_json: *const c_char,
    preset: *const c_char,
    out: *mut *mut CnpfRun,
) -> CnpfStatus {
    guard(|| {
        if out.is_null() {
            return fail(CnpfStatus::NullPointer, "out is null");
        }
        let name = tri!(str_arg(command, "command"));
        let text = tri!(opt_str_arg(config_json, "config_json"));
        let preset = tri!(opt_str_arg(preset, "preset"));
        let cmd: Command = match serde_json::from_value(serde_json::Value::String(name.to_string())) {
            Ok(c) => c,
            Err(_) => return fail(CnpfStatus::InvalidArgument, format!("unknown command `{name}`")),
        };
        let result = RunConfig::load(text, preset).and_then(|cfg| run(cmd, &cfg));
        let output = match result {
            Ok(o) => o,
            Err(e) => return from_error(e),
        };
        let json = match output.report_json() {
            Ok(b) => b,
            Err(e) => return from_error(e),
        };
        let report = CString::new(json).unwrap_or_default();
        *out = Box::into_raw(Box::new(CnpfRun { output, report }));
        CnpfStatus::Ok
    })
}

/// Whether every check of the run passed; false for a null handle.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cnpf_run_passed(run: *const CnpfRun) -> bool {
    run.as_ref().is_some_and(|r| r.output.report.passed)
}

/// Process exit code the CLI would return: 0 all passed, 1 a check failed.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cnpf_run_exit_code(run: *const CnpfRun) -> i32 {
    run.as_ref().map_or(cnpf::cli::EXIT_ERROR, |r| r.output.exit_code())
}

/// Number of checks in the run.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cnpf_run_check_count(run: *const CnpfRun) -> usize {
    run.as_ref().map_or(0, |r| r.output.report.checks.len())
}

/// The JSON report, owned by the handle.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cnpf_run_report(run: *const CnpfRun) -> *const c_char {
    run.as_ref().map_or(ptr::null(), |r| r.report.as_ptr())
}

/// # Safety
/// `run` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cnpf_run_free(run: *mut CnpfRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

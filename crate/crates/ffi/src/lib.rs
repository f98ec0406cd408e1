//! C interface to `dncoupling`.
//!
//! Every function returns an `i32` status code (`DNC_OK` on success) and
//! writes results through out-pointers. Objects are opaque handles created
//! by a `*_new` function and released with the matching `*_free`. The text
//! of the most recent error on the calling thread is available from
//! [`dnc_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dncoupling::discretization_1d::GridSpec1D;
use dncoupling::dn_solver::measure_rate_1d;
use dncoupling::experiments::spec::{SpecEntries, SweepSpec};
use dncoupling::experiments::sweep::{run_sweep, SweepTable};
use dncoupling::materials::{lookup, Material};
use dncoupling::rate_theory::{rate_report, sigma_exact, RateInputs};
use dncoupling::Error;

pub const DNC_OK: i32 = 0;
pub const DNC_ERR_NULL: i32 = 1;
pub const DNC_ERR_DOMAIN: i32 = 2;
pub const DNC_ERR_UNKNOWN_MATERIAL: i32 = 3;
pub const DNC_ERR_SIZE: i32 = 4;
pub const DNC_ERR_DIMENSION: i32 = 5;
pub const DNC_ERR_SINGULAR: i32 = 6;
pub const DNC_ERR_DEGENERATE: i32 = 7;
pub const DNC_ERR_ESTIMATION: i32 = 8;
pub const DNC_ERR_PARSE: i32 = 9;
pub const DNC_ERR_IO: i32 = 10;
pub const DNC_ERR_UTF8: i32 = 11;
/// The output buffer is too small; the required size has been reported.
pub const DNC_ERR_BUFFER: i32 = 12;
pub const DNC_ERR_PANIC: i32 = 99;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => DNC_ERR_DOMAIN,
        Error::UnknownMaterial(_) => DNC_ERR_UNKNOWN_MATERIAL,
        Error::Size(_) => DNC_ERR_SIZE,
        Error::Dimension(_) => DNC_ERR_DIMENSION,
        Error::Singular { .. } => DNC_ERR_SINGULAR,
        Error::Degenerate(_) => DNC_ERR_DEGENERATE,
        Error::Estimation(_) => DNC_ERR_ESTIMATION,
        Error::Parse(_) => DNC_ERR_PARSE,
        Error::Io(_) => DNC_ERR_IO,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), i32>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DNC_OK,
        Ok(Err(code)) => code,
        Err(_) => {
            set_error("internal panic");
            DNC_ERR_PANIC
        }
    }
}

fn check<T>(r: dncoupling::Result<T>) -> Result<T, i32> {
    r.map_err(|e| {
        set_error(e.to_string());
        code_of(&e)
    })
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), i32> {
    if p.is_null() {
        set_error(format!("`{what}` is null"));
        Err(DNC_ERR_NULL)
    } else {
        Ok(())
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, i32> {
    non_null(p, what)?;
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("`{what}` is not valid UTF-8"));
        DNC_ERR_UTF8
    })
}

/// Copies `text` with a trailing NUL into `buf`. `needed` (optional)
/// receives the size including the NUL. Leaves the last error untouched.
unsafe fn write_text(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), i32> {
    let n = text.len() + 1;
    if !needed.is_null() {
        *needed = n;
    }
    if buf.is_null() || len < n {
        return Err(DNC_ERR_BUFFER);
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must point to `len` writable bytes or be null; `needed` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dnc_last_error_message(buf: *mut c_char, len: usize, needed: *mut usize) -> i32 {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_text(&msg, buf, len, needed) {
        Ok(()) => DNC_OK,
        Err(c) => c,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dnc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Opaque parameter set of the one-dimensional rate formula.
pub struct DncRateInputs {
    inner: RateInputs,
}

/// Values of the rate estimators at one parameter point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DncRateReport {
    pub sigma_exact: f64,
    pub sigma_schur: f64,
    pub beta: f64,
    pub delta_r: f64,
    pub temporal_limit: f64,
}

fn boxed_inputs(out: *mut *mut DncRateInputs, r: dncoupling::Result<RateInputs>) -> Result<(), i32> {
    let inner = check(r)?;
    unsafe { *out = Box::into_raw(Box::new(DncRateInputs { inner })) };
    Ok(())
}

/// Unit subdomains with `dx2 = r * dx1`, materials given by preset name
/// (`air`, `water`, `steel`).
///
/// # Safety
/// `mat1` and `mat2` must be NUL-terminated strings; `out` must be valid
/// for writes. The handle must be released with [`dnc_rate_inputs_free`].
#[no_mangle]
pub unsafe extern "C" fn dnc_rate_inputs_new(
    dt: f64,
    dx1: f64,
    r: f64,
    mat1: *const c_char,
    mat2: *const c_char,
    out: *mut *mut DncRateInputs,
) -> i32 {
    guard(|| {
        non_null(out, "out")?;
        let m1 = check(lookup(str_arg(mat1, "mat1")?, &[]))?;
        let m2 = check(lookup(str_arg(mat2, "mat2")?, &[]))?;
        boxed_inputs(out, RateInputs::from_dx1_r(dt, dx1, r, m1, m2))
    })
}

/// Explicit node counts, widths and material coefficients.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn dnc_rate_inputs_new_custom(
    dt: f64,
    n1: usize,
    dx1: f64,
    n2: usize,
    dx2: f64,
    lambda1: f64,
    rho1: f64,
    cp1: f64,
    lambda2: f64,
    rho2: f64,
    cp2: f64,
    out: *mut *mut DncRateInputs,
) -> i32 {
    guard(|| {
        non_null(out, "out")?;
        let grid = check(GridSpec1D::with_spacing(n1, dx1, n2, dx2))?;
        let m1 = check(Material::new(lambda1, rho1, cp1))?;
        let m2 = check(Material::new(lambda2, rho2, cp2))?;
        boxed_inputs(out, RateInputs::new(dt, grid, m1, m2))
    })
}

/// # Safety
/// `h` must be null or a handle from `dnc_rate_inputs_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dnc_rate_inputs_free(h: *mut DncRateInputs) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dnc_sigma_exact(h: *const DncRateInputs, out: *mut f64) -> i32 {
    guard(|| {
        non_null(h, "handle")?;
        non_null(out, "out")?;
        *out = check(sigma_exact(&(*h).inner))?;
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dnc_rate_report(h: *const DncRateInputs, out: *mut DncRateReport) -> i32 {
    guard(|| {
        non_null(h, "handle")?;
        non_null(out, "out")?;
        let r = check(rate_report(&(*h).inner))?;
        *out = DncRateReport {
            sigma_exact: r.sigma_exact,
            sigma_schur: r.sigma_schur,
            beta: r.beta,
            delta_r: r.delta_r,
            temporal_limit: r.temporal_limit,
        };
        Ok(())
    })
}

/// Runs the Dirichlet-Neumann iteration for one time step and reports the
/// observed rate; `converged` receives 1 or 0.
///
/// # Safety
/// `h` must be a live handle; `rate` and `converged` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dnc_observed_rate_1d(
    h: *const DncRateInputs,
    tol: f64,
    max_iters: usize,
    rate: *mut f64,
    converged: *mut i32,
) -> i32 {
    guard(|| {
        non_null(h, "handle")?;
        non_null(rate, "rate")?;
        non_null(converged, "converged")?;
        let i = &(*h).inner;
        let (r, trace) = check(measure_rate_1d(&i.grid, &i.mat1, &i.mat2, i.dt, tol, max_iters))?;
        *rate = r;
        *converged = trace.converged as i32;
        Ok(())
    })
}

/// Opaque result of a parameter sweep.
pub struct DncSweepTable {
    inner: SweepTable,
    csv: String,
}

/// Parses a sweep spec (`key = value` lines) and runs it. Row-level
/// failures are reported in the table, see [`dnc_sweep_has_errors`].
///
/// # Safety
/// `spec_text` must be a NUL-terminated string and `out` valid for writes.
/// Release the table with [`dnc_sweep_free`].
#[no_mangle]
pub unsafe extern "C" fn dnc_sweep_run(spec_text: *const c_char, out: *mut *mut DncSweepTable) -> i32 {
    guard(|| {
        non_null(out, "out")?;
        let text = str_arg(spec_text, "spec_text")?;
        let spec = check(SpecEntries::parse(text).and_then(|e| SweepSpec::from_entries(&e)))?;
        let inner = run_sweep(&spec);
        let csv = inner.to_csv();
        *out = Box::into_raw(Box::new(DncSweepTable { inner, csv }));
        Ok(())
    })
}

/// # Safety
/// `h` must be a live table; `rows` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dnc_sweep_rows(h: *const DncSweepTable, rows: *mut usize) -> i32 {
    guard(|| {
        non_null(h, "table")?;
        non_null(rows, "rows")?;
        *rows = (*h).inner.rows.len();
        Ok(())
    })
}

/// Value of mode column `col` (in spec order) at row `row`.
///
/// # Safety
/// `h` must be a live table; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dnc_sweep_value(h: *const DncSweepTable, row: usize, col: usize, out: *mut f64) -> i32 {
    guard(|| {
        non_null(h, "table")?;
        non_null(out, "out")?;
        let table = &*h;
        let v = table.inner.rows.get(row).and_then(|r| r.values.get(col)).ok_or_else(|| {
            set_error(format!("cell ({row}, {col}) is out of range"));
            DNC_ERR_DIMENSION
        })?;
        *out = *v;
        Ok(())
    })
}

/// `has_errors` receives 1 when any row carries an error marker.
///
/// # Safety
/// `h` must be a live table; `has_errors` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dnc_sweep_has_errors(h: *const DncSweepTable, has_errors: *mut i32) -> i32 {
    guard(|| {
        non_null(h, "table")?;
        non_null(has_errors, "has_errors")?;
        *has_errors = (*h).inner.has_errors() as i32;
        Ok(())
    })
}

/// Copies the CSV rendering of the table into `buf`. Call with a null
/// buffer to query the size through `needed`.
///
/// # Safety
/// `h` must be a live table; `buf` null or `len` writable bytes; `needed`
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dnc_sweep_csv(h: *const DncSweepTable, buf: *mut c_char, len: usize, needed: *mut usize) -> i32 {
    guard(|| {
        non_null(h, "table")?;
        let csv = &(*h).csv;
        write_text(csv, buf, len, needed)
            .inspect_err(|_| set_error(format!("buffer of {len} bytes is too small, {} needed", csv.len() + 1)))
    })
}

/// # Safety
/// `h` must be null or a table from [`dnc_sweep_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dnc_sweep_free(h: *mut DncSweepTable) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

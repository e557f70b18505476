//! C ABI over `esdlab`.
//!
//! Every fallible entry point returns an [`EsdlabStatus`]; `ESDLAB_STATUS_OK` is 0.
//! On failure the thread-local last-error message is set and can be read
//! back with [`esdlab_last_error`]. Objects are opaque handles created by a
//! `*_new`-style call and released by the matching `*_free`; passing NULL to
//! a `*_free` is a no-op. Panics never cross the boundary: they surface as
//! `ESDLAB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use esdlab::ensembles::{build_iid_matrix, ScalarDistribution};
use esdlab::harness::{self, ExperimentConfig, RunOutput};
use esdlab::limits::{circular_log_potential, DsProblem, MeasureH, SolverOptions};
use esdlab::numerics::{eigenvalues, log_abs_det, singular_values, LogDet, LogDetMethod};
use esdlab::{Complex64, ComplexMatrix, Error, RngStream};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsdlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    Config = 4,
    DegenerateOperator = 5,
    DegenerateInput = 6,
    NumericalFailure = 7,
    Singularity = 8,
    SolverFailure = 9,
    Branch = 10,
    Io = 11,
    Panic = 12,
}

/// A dense complex matrix, row-major.
pub struct EsdlabMatrix(ComplexMatrix);

/// A seeded random stream.
pub struct EsdlabRng(RngStream);

/// A Dozier–Silverstein problem `(H, c)` with default solver settings.
pub struct EsdlabDsProblem(DsProblem);

/// The in-memory result of one experiment run.
pub struct EsdlabRun(RunOutput);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let mut bytes = msg.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> EsdlabStatus {
    match err {
        Error::Config(_) => EsdlabStatus::Config,
        Error::DegenerateOperator(_) => EsdlabStatus::DegenerateOperator,
        Error::DegenerateInput(_) => EsdlabStatus::DegenerateInput,
        Error::NumericalFailure { .. } => EsdlabStatus::NumericalFailure,
        Error::Singularity(_) => EsdlabStatus::Singularity,
        Error::SolverFailure { .. } => EsdlabStatus::SolverFailure,
        Error::Branch { .. } => EsdlabStatus::Branch,
        Error::Io { .. } => EsdlabStatus::Io,
    }
}

/// Failure inside the shim itself, before the library is reached.
struct Reject(EsdlabStatus, &'static str);

enum Failure {
    Lib(Error),
    Shim(Reject),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<Reject> for Failure {
    fn from(r: Reject) -> Self {
        Failure::Shim(r)
    }
}

/// Runs `f`, translating errors and panics into a status and the last-error
/// message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EsdlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EsdlabStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Shim(Reject(status, msg)))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside esdlab");
            EsdlabStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &'static str) -> Result<(), Reject> {
    if p.is_null() {
        Err(Reject(EsdlabStatus::NullPointer, what))
    } else {
        Ok(())
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Reject> {
    non_null(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Reject(EsdlabStatus::InvalidArgument, "string is not UTF-8"))
}

fn into_handle<T>(out: *mut *mut T, value: T) {
    // SAFETY: callers check `out` for NULL first.
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

unsafe fn free_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn esdlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// always NUL-terminated when `len > 0`). Returns the full message length
/// excluding the terminator.
///
/// # Safety
/// `buf` must be NULL or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn esdlab_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let k = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, k);
            *buf.add(k) = 0;
        }
        bytes.len()
    })
}

/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn esdlab_rng_new(master_seed: u64, stream_index: u64, out: *mut *mut EsdlabRng) -> EsdlabStatus {
    guard(|| {
        non_null(out, "out is NULL")?;
        into_handle(out, EsdlabRng(RngStream::new(master_seed, stream_index)));
        Ok(())
    })
}

/// # Safety
/// `rng` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn esdlab_rng_next_u64(rng: *mut EsdlabRng, out: *mut u64) -> EsdlabStatus {
    guard(|| {
        non_null(rng, "rng is NULL")?;
        non_null(out, "out is NULL")?;
        *out = (*rng).0.next_u64();
        Ok(())
    })
}

/// # Safety
/// `rng` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn esdlab_rng_free(rng: *mut EsdlabRng) {
    free_handle(rng)
}

/// Builds a `rows × cols` matrix from row-major real and imaginary parts.
/// `im` may be NULL for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-NULL) must be valid for `rows·cols` reads.
#[no_mangle]
pub unsafe extern "C" fn esdlab_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut EsdlabMatrix,
) -> EsdlabStatus {
    guard(|| {
        non_null(out, "out is NULL")?;
        let len = rows
            .checked_mul(cols)
            .ok_or(Reject(EsdlabStatus::InvalidArgument, "rows·cols overflows"))?;
        if len > 0 {
            non_null(re, "re is NULL")?;
        }
        let data = (0..len)
            .map(|k| Complex64::new(*re.add(k), if im.is_null() { 0.0 } else { *im.add(k) }))
            .collect();
        into_handle(out, EsdlabMatrix(ComplexMatrix::new(rows, cols, data)?));
        Ok(())
    })
}

/// Draws an `n × n` iid matrix. `distribution_json` is a distribution spec
/// such as `{"kind":"bernoulli"}`; the draw advances `rng`.
///
/// # Safety
/// `distribution_json` must be a NUL-terminated string, `rng` a live handle.
#[no_mangle]
pub unsafe extern "C" fn esdlab_matrix_iid(
    n: usize,
    distribution_json: *const c_char,
    rng: *mut EsdlabRng,
    out: *mut *mut EsdlabMatrix,
) -> EsdlabStatus {
    guard(|| {
        non_null(out, "out is NULL")?;
        non_null(rng, "rng is NULL")?;
        let text = c_str(distribution_json, "distribution_json is NULL")?;
        let dist: ScalarDistribution =
            serde_json::from_str(text).map_err(|e| Error::config(format!("distribution: {e}")))?;
        into_handle(out, EsdlabMatrix(build_iid_matrix(n, &dist, &mut (*rng).0)?));
        Ok(())
    })
}

/// # Safety
/// `m` must be a live handle; `rows` and `cols` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn esdlab_matrix_shape(m: *const EsdlabMatrix, rows: *mut usize, cols: *mut usize) -> EsdlabStatus {
    guard(|| {
        non_null(m, "matrix is NULL")?;
        if !rows.is_null() {
            *rows = (*m).0.rows();
        }
        if !cols.is_null() {
            *cols = (*m).0.cols();
        }
        Ok(())
    })
}

/// Reads entry `(i, j)`.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn esdlab_matrix_get(
    m: *const EsdlabMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> EsdlabStatus {
    guard(|| {
        non_null(m, "matrix is NULL")?;
        non_null(re, "re is NULL")?;
        non_null(im, "im is NULL")?;
        let a = &(*m).0;
        if i >= a.rows() || j >= a.cols() {
            return Err(Reject(EsdlabStatus::InvalidArgument, "index out of range").into());
        }
        let v = a.row(i)[j];
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn esdlab_matrix_free(m: *mut EsdlabMatrix) {
    free_handle(m)
}

/// Writes the `n` eigenvalues of a square matrix into `re[0..n]`, `im[0..n]`.
/// Fails with `ESDLAB_STATUS_BUFFER_TOO_SMALL` when `capacity < n`.
///
/// # Safety
/// `re` and `im` must be valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn esdlab_eigenvalues(
    m: *const EsdlabMatrix,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> EsdlabStatus {
    guard(|| {
        non_null(m, "matrix is NULL")?;
        non_null(re, "re is NULL")?;
        non_null(im, "im is NULL")?;
        let a = &(*m).0;
        if capacity < a.rows() {
            return Err(Reject(EsdlabStatus::BufferTooSmall, "capacity below matrix order").into());
        }
        for (k, z) in eigenvalues(a)?.values.into_iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

/// Writes the `min(rows, cols)` singular values, non-increasing, into `out`.
///
/// # Safety
/// `out` must be valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn esdlab_singular_values(m: *const EsdlabMatrix, out: *mut f64, capacity: usize) -> EsdlabStatus {
    guard(|| {
        non_null(m, "matrix is NULL")?;
        non_null(out, "out is NULL")?;
        let a = &(*m).0;
        if capacity < a.rows().min(a.cols()) {
            return Err(Reject(EsdlabStatus::BufferTooSmall, "capacity below min(rows, cols)").into());
        }
        for (k, s) in singular_values(a)?.values.into_iter().enumerate() {
            *out.add(k) = s;
        }
        Ok(())
    })
}

/// `log|det A|` from singular values; `-INFINITY` for an exactly singular
/// matrix.
///
/// # Safety
/// `m` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn esdlab_log_abs_det(m: *const EsdlabMatrix, out: *mut f64) -> EsdlabStatus {
    guard(|| {
        non_null(m, "matrix is NULL")?;
        non_null(out, "out is NULL")?;
        *out = match log_abs_det(&(*m).0, LogDetMethod::ViaSingular)? {
            LogDet::Finite(v) => v,
            LogDet::MinusInfinity => f64::NEG_INFINITY,
        };
        Ok(())
    })
}

/// Log-potential of the uniform law on the unit disk at `re + i·im`.
#[no_mangle]
pub extern "C" fn esdlab_circular_log_potential(re: f64, im: f64) -> f64 {
    circular_log_potential(Complex64::new(re, im))
}

/// `H = Σ weights[k]·δ_{atoms[k]}` (weights must sum to 1) with aspect
/// ratio `c`.
///
/// # Safety
/// `atoms` and `weights` must be valid for `len` reads.
#[no_mangle]
pub unsafe extern "C" fn esdlab_ds_problem_new(
    atoms: *const f64,
    weights: *const f64,
    len: usize,
    c: f64,
    out: *mut *mut EsdlabDsProblem,
) -> EsdlabStatus {
    guard(|| {
        non_null(out, "out is NULL")?;
        non_null(atoms, "atoms is NULL")?;
        non_null(weights, "weights is NULL")?;
        let a = std::slice::from_raw_parts(atoms, len).to_vec();
        let w = std::slice::from_raw_parts(weights, len).to_vec();
        let problem = DsProblem::new(MeasureH::new(a, w)?, c, SolverOptions::default())?;
        into_handle(out, EsdlabDsProblem(problem));
        Ok(())
    })
}

/// Solves for the Stieltjes transform `m(w)`, `Im w > 0`.
///
/// # Safety
/// `problem` must be a live handle; `m_re` and `m_im` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn esdlab_ds_solve(
    problem: *const EsdlabDsProblem,
    w_re: f64,
    w_im: f64,
    m_re: *mut f64,
    m_im: *mut f64,
) -> EsdlabStatus {
    guard(|| {
        non_null(problem, "problem is NULL")?;
        non_null(m_re, "m_re is NULL")?;
        non_null(m_im, "m_im is NULL")?;
        let fp = (*problem).0.solve(Complex64::new(w_re, w_im))?;
        *m_re = fp.m.re;
        *m_im = fp.m.im;
        Ok(())
    })
}

/// # Safety
/// `problem` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn esdlab_ds_problem_free(problem: *mut EsdlabDsProblem) {
    free_handle(problem)
}

/// Runs the experiment described by `config_json`. When `output_dir` is
/// non-NULL the CSV, SVG and manifest artifacts are written there.
///
/// # Safety
/// `config_json` and `output_dir` must be NUL-terminated strings (or NULL
/// for `output_dir`); `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn esdlab_run_experiment(
    config_json: *const c_char,
    output_dir: *const c_char,
    out: *mut *mut EsdlabRun,
) -> EsdlabStatus {
    guard(|| {
        non_null(out, "out is NULL")?;
        let config = ExperimentConfig::from_json(c_str(config_json, "config_json is NULL")?)?;
        let output = if output_dir.is_null() {
            harness::execute(&config)?
        } else {
            let dir = c_str(output_dir, "output_dir is NULL")?;
            harness::run(&config, Path::new(dir))?.0
        };
        into_handle(out, EsdlabRun(output));
        Ok(())
    })
}

/// Process exit code the CLI would use: 0 all assertions pass, 1 some
/// assertion fails, 3 some trial errored. Returns -1 for NULL.
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn esdlab_run_exit_code(run: *const EsdlabRun) -> i32 {
    if run.is_null() {
        return -1;
    }
    (*run).0.exit_code()
}

/// Number of assertions evaluated, and how many passed.
///
/// # Safety
/// `run` must be a live handle; `total` and `passed` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn esdlab_run_assertions(run: *const EsdlabRun, total: *mut usize, passed: *mut usize) -> EsdlabStatus {
    guard(|| {
        non_null(run, "run is NULL")?;
        let a = &(*run).0.assertions;
        if !total.is_null() {
            *total = a.len();
        }
        if !passed.is_null() {
            *passed = a.iter().filter(|x| x.passed).count();
        }
        Ok(())
    })
}

/// # Safety
/// `run` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn esdlab_run_free(run: *mut EsdlabRun) {
    free_handle(run)
}

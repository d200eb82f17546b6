//! C interface.
//!
//! Matrices cross the boundary as opaque [`AbnMatrix`] handles created by
//! `abn_matrix_new` or `abn_matrix_from_json` and released with
//! `abn_matrix_free`. Every fallible function returns an [`AbnStatus`] and
//! writes its result through an out-pointer; on failure the message is
//! available from `abn_last_error` on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use abnorm::alphabeta::{alpha_beta_norm, OptimizerOptions, Weights};
use abnorm::bounds::{MixKind, OperatorProfile};
use abnorm::harness::io::parse_matrix_json;
use abnorm::norms::{self, SweepOptions};
use abnorm::{ComplexMatrix, Error};

/// Opaque matrix handle.
pub struct AbnMatrix(ComplexMatrix);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    DimensionError = 4,
    NonHermitian = 5,
    ConvergenceFailure = 6,
    PostCheckViolation = 7,
    HypothesisViolated = 8,
    UnsupportedDimension = 9,
    IoError = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbnMixKind {
    Est4 = 0,
    Est5 = 1,
    Buzano = 2,
    ReIm = 3,
}

impl From<AbnMixKind> for MixKind {
    fn from(k: AbnMixKind) -> Self {
        match k {
            AbnMixKind::Est4 => MixKind::Est4,
            AbnMixKind::Est5 => MixKind::Est5,
            AbnMixKind::Buzano => MixKind::Buzano,
            AbnMixKind::ReIm => MixKind::ReIm,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> AbnStatus {
    match e {
        Error::NonHermitianInput { .. } => AbnStatus::NonHermitian,
        Error::ConvergenceFailure(_) => AbnStatus::ConvergenceFailure,
        Error::DomainError(_) | Error::InvalidWeights { .. } | Error::InvalidParams(_) | Error::InvalidSpec(_) => {
            AbnStatus::InvalidArgument
        }
        Error::DimensionMismatch { .. } | Error::DimensionError(_) | Error::EmptySubspace => AbnStatus::DimensionError,
        Error::UnsupportedDimension(_) => AbnStatus::UnsupportedDimension,
        Error::PostCheckViolation { .. } => AbnStatus::PostCheckViolation,
        Error::HypothesisViolated { .. } => AbnStatus::HypothesisViolated,
        Error::ParseError(_) => AbnStatus::ParseError,
        Error::Io(_) => AbnStatus::IoError,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (AbnStatus, String)>) -> AbnStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbnStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AbnStatus::Panic
        }
    }
}

fn lib(e: Error) -> (AbnStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (AbnStatus, String) {
    (AbnStatus::NullPointer, format!("{what} is null"))
}

unsafe fn matrix<'a>(m: *const AbnMatrix) -> Result<&'a ComplexMatrix, (AbnStatus, String)> {
    m.as_ref().map(|m| &m.0).ok_or_else(|| null("matrix"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), (AbnStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Creates an `n×n` matrix from row-major real and imaginary parts.
/// `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `n*n` readable doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn abn_matrix_new(n: usize, re: *const f64, im: *const f64, out: *mut *mut AbnMatrix) -> AbnStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let len = n.checked_mul(n).ok_or((AbnStatus::DimensionError, "n*n overflows".to_string()))?;
        let re = std::slice::from_raw_parts(re, len);
        let im = if im.is_null() { None } else { Some(std::slice::from_raw_parts(im, len)) };
        let rows: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Complex64::new(re[i * n + j], im.map_or(0.0, |v| v[i * n + j])))
                    .collect()
            })
            .collect();
        let m = ComplexMatrix::from_rows(&rows).map_err(lib)?;
        write(out, Box::into_raw(Box::new(AbnMatrix(m))))
    })
}

/// Parses `{"n": .., "entries": [[[re, im], ..], ..]}`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abn_matrix_from_json(json: *const c_char, out: *mut *mut AbnMatrix) -> AbnStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (AbnStatus::ParseError, "input is not UTF-8".to_string()))?;
        let m = parse_matrix_json(text).map_err(lib)?;
        write(out, Box::into_raw(Box::new(AbnMatrix(m))))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn abn_matrix_free(m: *mut AbnMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of the matrix, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn abn_matrix_dim(m: *const AbnMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abn_operator_norm(m: *const AbnMatrix, out: *mut f64) -> AbnStatus {
    guard(|| write(out, norms::operator_norm(matrix(m)?).map_err(lib)?.value))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abn_numerical_radius(m: *const AbnMatrix, out: *mut f64) -> AbnStatus {
    guard(|| write(out, norms::numerical_radius(matrix(m)?, &SweepOptions::default()).map_err(lib)?.value))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abn_crawford_number(m: *const AbnMatrix, out: *mut f64) -> AbnStatus {
    guard(|| write(out, norms::crawford_number(matrix(m)?, &SweepOptions::default()).map_err(lib)?.value))
}

/// `‖T‖_{α,β}`. `restarts = 0` selects the default.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abn_alpha_beta_norm(
    m: *const AbnMatrix,
    alpha: f64,
    beta: f64,
    restarts: usize,
    seed: u64,
    out: *mut f64,
) -> AbnStatus {
    guard(|| {
        let mut opts = OptimizerOptions {
            seed,
            ..OptimizerOptions::default()
        };
        if restarts > 0 {
            opts.restarts = restarts;
        }
        let w = Weights::new(alpha, beta).map_err(lib)?;
        write(out, alpha_beta_norm(matrix(m)?, w, &opts).map_err(lib)?.value)
    })
}

/// Infimum over weights of a bound on `w(T)`. `out_t` (nullable) receives
/// the minimizing `t = α/(α+β)`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable; `out_t` null or writable.
#[no_mangle]
pub unsafe extern "C" fn abn_infimum_mix(m: *const AbnMatrix, kind: AbnMixKind, out: *mut f64, out_t: *mut f64) -> AbnStatus {
    guard(|| {
        let r = OperatorProfile::new(matrix(m)?).infimum_mix(kind.into(), 1e-10).map_err(lib)?;
        write(out, r.value)?;
        if !out_t.is_null() {
            out_t.write(r.params.mix.map_or(f64::NAN, |t| t.value()));
        }
        Ok(())
    })
}

/// Refined lower bound for `w(T)²`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abn_refined_lower_bound(m: *const AbnMatrix, out: *mut f64) -> AbnStatus {
    guard(|| write(out, OperatorProfile::new(matrix(m)?).refined_lower_bound(1e-9).map_err(lib)?.value))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library.
#[no_mangle]
pub extern "C" fn abn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static nul-terminated string.
#[no_mangle]
pub extern "C" fn abn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

//! C interface to `pareto-tail`.
//!
//! Every fallible function returns a [`PtStatus`]; on failure a message is
//! kept per thread and can be read with [`pt_last_error_message`]. Samples
//! are opaque handles created by [`pt_sample_new`] and released by
//! [`pt_sample_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pareto_tail::tail_math::{alpha_for, tail_value};
use pareto_tail::ustat::{estimate, SortedSample};
use pareto_tail::variance_ci::{confidence_interval, interval_curve, VarianceMethod};
use pareto_tail::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside its domain (tail value not in (0,1), α ≤ 0, bad level).
    Domain = 2,
    /// Non-positive or non-finite observations, or fewer than two.
    InvalidSample = 3,
    /// Too few exceedances for the requested quantity.
    InsufficientData = 4,
    /// Tail value outside what the inversion bracket attains.
    OutOfBracket = 5,
    /// Quadrature failure, unstable bootstrap and other numeric failures.
    Numeric = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtMethod {
    Unbiased = 0,
    Jackknife = 1,
    Bootstrap = 2,
}

/// Variance estimator selection; `bootstrap_reps` and `seed` are read only
/// for [`PtMethod::Bootstrap`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PtMethodSpec {
    pub method: PtMethod,
    pub bootstrap_reps: u32,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PtInterval {
    pub t_hat: f64,
    pub lo: f64,
    pub hi: f64,
    pub sigma_hat: f64,
}

/// One tail-plot point; `sigma_hat` is NaN and `lo == hi == t_hat` where the
/// variance estimator is undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PtCurvePoint {
    pub u: f64,
    pub m: usize,
    pub t_hat: f64,
    pub lo: f64,
    pub hi: f64,
    pub sigma_hat: f64,
}

/// Opaque sorted sample.
pub struct PtSample(SortedSample);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> PtStatus {
    match e {
        Error::Domain { .. } | Error::InvalidParameter { .. } => PtStatus::Domain,
        Error::InvalidSample(_) | Error::InsufficientSample { .. } => PtStatus::InvalidSample,
        Error::InsufficientExceedances { .. } | Error::IndexOutOfRange { .. } => PtStatus::InsufficientData,
        Error::OutOfBracket { .. } => PtStatus::OutOfBracket,
        _ => PtStatus::Numeric,
    }
}

fn guard<F: FnOnce() -> Result<(), PtStatus>>(f: F) -> PtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PtStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            PtStatus::Panic
        }
    }
}

fn fail(e: Error) -> PtStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> PtStatus {
    set_error(format!("{what} is null"));
    PtStatus::NullPointer
}

fn method_of(spec: &PtMethodSpec) -> VarianceMethod {
    match spec.method {
        PtMethod::Unbiased => VarianceMethod::Unbiased,
        PtMethod::Jackknife => VarianceMethod::Jackknife,
        PtMethod::Bootstrap => VarianceMethod::Bootstrap {
            reps: spec.bootstrap_reps as usize,
            seed: spec.seed,
        },
    }
}

/// Copies `len` values into a new sample.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_sample_new(values: *const f64, len: usize, out: *mut *mut PtSample) -> PtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if values.is_null() && len > 0 {
            return Err(null("values"));
        }
        let data = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(values, len).to_vec() };
        let sample = SortedSample::new(data).map_err(fail)?;
        *out = Box::into_raw(Box::new(PtSample(sample)));
        Ok(())
    })
}

/// Releases a sample; null is ignored.
///
/// # Safety
/// `sample` must come from [`pt_sample_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pt_sample_free(sample: *mut PtSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Number of observations; 0 for null.
///
/// # Safety
/// `sample` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_sample_len(sample: *const PtSample) -> usize {
    sample.as_ref().map_or(0, |s| s.0.len())
}

/// Pareto tail value of tail index `alpha`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_tail_value(alpha: f64, out: *mut f64) -> PtStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = tail_value(alpha).map_err(fail)?;
        Ok(())
    })
}

/// Tail index whose Pareto tail value is `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_alpha_for(t: f64, out: *mut f64) -> PtStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = alpha_for(t).map_err(fail)?;
        Ok(())
    })
}

/// Estimate at threshold `u` and the number of exceedances.
///
/// # Safety
/// `sample` must be a live handle; `t_hat` and `m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_estimate(sample: *const PtSample, u: f64, t_hat: *mut f64, m: *mut usize) -> PtStatus {
    guard(|| {
        let s = sample.as_ref().ok_or_else(|| null("sample"))?;
        let (t_hat, m) = (t_hat.as_mut().ok_or_else(|| null("t_hat"))?, m.as_mut().ok_or_else(|| null("m"))?);
        let est = estimate(&s.0, u).map_err(fail)?;
        *t_hat = est.t_hat;
        *m = est.m;
        Ok(())
    })
}

/// Confidence interval at threshold `u`.
///
/// # Safety
/// `sample` and `method` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pt_confidence_interval(
    sample: *const PtSample,
    u: f64,
    level: f64,
    method: *const PtMethodSpec,
    out: *mut PtInterval,
) -> PtStatus {
    guard(|| {
        let s = sample.as_ref().ok_or_else(|| null("sample"))?;
        let method = method.as_ref().ok_or_else(|| null("method"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let ci = confidence_interval(&s.0, u, level, method_of(method)).map_err(fail)?;
        *out = PtInterval {
            t_hat: ci.t_hat,
            lo: ci.lo,
            hi: ci.hi,
            sigma_hat: ci.sigma_hat,
        };
        Ok(())
    })
}

/// Tail plot at the `k_max` smallest order statistics.
///
/// Writes the number of points to `written`. If `capacity` is too small,
/// nothing is copied, `written` holds the required size and the status is
/// [`PtStatus::BufferTooSmall`].
///
/// # Safety
/// `out` must have room for `capacity` points (it may be null when
/// `capacity` is 0); `sample` and `method` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pt_curve(
    sample: *const PtSample,
    k_max: usize,
    level: f64,
    method: *const PtMethodSpec,
    out: *mut PtCurvePoint,
    capacity: usize,
    written: *mut usize,
) -> PtStatus {
    guard(|| {
        let s = sample.as_ref().ok_or_else(|| null("sample"))?;
        let method = method.as_ref().ok_or_else(|| null("method"))?;
        let written = written.as_mut().ok_or_else(|| null("written"))?;
        let points = interval_curve(&s.0, k_max, level, method_of(method)).map_err(fail)?;
        *written = points.len();
        if capacity < points.len() {
            set_error(format!("need room for {} points, got {capacity}", points.len()));
            return Err(PtStatus::BufferTooSmall);
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let dst = std::slice::from_raw_parts_mut(out, points.len());
        for (d, p) in dst.iter_mut().zip(&points) {
            *d = PtCurvePoint {
                u: p.u,
                m: p.m,
                t_hat: p.t_hat,
                lo: p.lo,
                hi: p.hi,
                sigma_hat: p.sigma_hat.unwrap_or(f64::NAN),
            };
        }
        Ok(())
    })
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `capacity`. Returns the full length including the NUL, so a
/// call with `capacity` 0 sizes the buffer.
///
/// # Safety
/// `buf` must have room for `capacity` bytes (or be null with `capacity` 0).
#[no_mangle]
pub unsafe extern "C" fn pt_last_error_message(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

//! C ABI over `tycoon-core`.
//!
//! Objects cross the boundary as opaque pointers created by `*_new` or a
//! producing call and released with the matching `*_free`. Every fallible
//! function returns a [`TycoonStatus`]; on failure a message is available
//! from [`tycoon_last_error`] on the same thread. Matrices are exchanged
//! row-major with rows as frequency bins and columns as time samples.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use tycoon_core::baselines::{sst_stft, stft_gauss, WindowSpec};
use tycoon_core::io::{read_tfr, write_tfr};
use tycoon_core::metrics::ot1d;
use tycoon_core::ndarray::Array1;
use tycoon_core::{
    tycoon, ChirpTrack, DerivMethod, MuSchedule, SampledSignal, TFGrid, TFMatrix, TycoonError, TycoonParams,
};

/// Result codes shared by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TycoonStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ShapeMismatch = 3,
    SolverFailure = 4,
    Io = 5,
    Format = 6,
    Panic = 7,
}

/// Time-derivative discretization.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TycoonDeriv {
    Spectral = 0,
    FiniteDifference = 1,
}

/// Opaque solver parameters.
pub struct TycoonParamsHandle {
    inner: TycoonParams,
}

/// Opaque time-frequency representation, with the chirp track when it
/// came from the solver.
pub struct TycoonTfr {
    tfr: TFMatrix,
    alpha: Option<ChirpTrack>,
    chosen_mu_tilde: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn status_of(e: &TycoonError) -> TycoonStatus {
    match e {
        TycoonError::InvalidGrid { .. } | TycoonError::InvalidParameter(_) | TycoonError::Degenerate(_) => {
            TycoonStatus::InvalidArgument
        }
        TycoonError::ShapeMismatch { .. } => TycoonStatus::ShapeMismatch,
        TycoonError::NonFinite(_) | TycoonError::Diverged(_) => TycoonStatus::SolverFailure,
        TycoonError::Io(_) => TycoonStatus::Io,
        TycoonError::Format(_) => TycoonStatus::Format,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), TycoonStatus>) -> TycoonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TycoonStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TycoonStatus::Panic
        }
    }
}

fn fail(e: TycoonError) -> TycoonStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> TycoonStatus {
    set_error(format!("{what} is null"));
    TycoonStatus::NullPointer
}

unsafe fn slice<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], TycoonStatus> {
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn signal_from(data: *const f64, len: usize, dt: f64) -> Result<SampledSignal, TycoonStatus> {
    let x = slice(data, len, "signal")?;
    SampledSignal::new(Array1::from(x.to_vec()), dt).map_err(fail)
}

unsafe fn params_mut<'a>(p: *mut TycoonParamsHandle) -> Result<&'a mut TycoonParams, TycoonStatus> {
    p.as_mut().map(|h| &mut h.inner).ok_or_else(|| null("params"))
}

unsafe fn write_out(out: *mut *mut TycoonTfr, value: TycoonTfr) -> Result<(), TycoonStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread (empty after a
/// success). Valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn tycoon_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parameters with the library defaults. Free with [`tycoon_params_free`].
#[no_mangle]
pub extern "C" fn tycoon_params_new() -> *mut TycoonParamsHandle {
    Box::into_raw(Box::new(TycoonParamsHandle {
        inner: TycoonParams::default(),
    }))
}

/// # Safety
/// `p` must come from [`tycoon_params_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_free(p: *mut TycoonParamsHandle) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_lambda_tilde(p: *mut TycoonParamsHandle, value: f64) -> TycoonStatus {
    guard(|| {
        let params = params_mut(p)?;
        let next = TycoonParams {
            lambda_tilde: value,
            ..params.clone()
        };
        next.validate().map_err(fail)?;
        *params = next;
        Ok(())
    })
}

/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_gamma(p: *mut TycoonParamsHandle, value: f64) -> TycoonStatus {
    guard(|| {
        let params = params_mut(p)?;
        let next = TycoonParams {
            gamma: value,
            ..params.clone()
        };
        next.validate().map_err(fail)?;
        *params = next;
        Ok(())
    })
}

/// Relative-change stopping thresholds for `F` and the chirp track.
///
/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_tolerances(p: *mut TycoonParamsHandle, eps1: f64, eps2: f64) -> TycoonStatus {
    guard(|| {
        let params = params_mut(p)?;
        let next = TycoonParams {
            eps1,
            eps2,
            ..params.clone()
        };
        next.validate().map_err(fail)?;
        *params = next;
        Ok(())
    })
}

/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_max_iters(
    p: *mut TycoonParamsHandle,
    max_inner: usize,
    max_outer: usize,
) -> TycoonStatus {
    guard(|| {
        let params = params_mut(p)?;
        let next = TycoonParams {
            max_inner_iters: max_inner,
            max_outer_iters: max_outer,
            ..params.clone()
        };
        next.validate().map_err(fail)?;
        *params = next;
        Ok(())
    })
}

/// `count` log-spaced values from `start` to `end`, scaled by the signal
/// energy.
///
/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_relative_schedule(
    p: *mut TycoonParamsHandle,
    start: f64,
    end: f64,
    count: usize,
) -> TycoonStatus {
    guard(|| {
        let params = params_mut(p)?;
        tycoon_core::functional::log_space(start, end, count).map_err(fail)?;
        params.mu_schedule = MuSchedule::Relative { start, end, count };
        Ok(())
    })
}

/// Absolute, strictly decreasing `mu_tilde` values.
///
/// # Safety
/// `p` must be a live params handle; `values` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_explicit_schedule(
    p: *mut TycoonParamsHandle,
    values: *const f64,
    len: usize,
) -> TycoonStatus {
    guard(|| {
        let params = params_mut(p)?;
        let v = slice(values, len, "values")?.to_vec();
        let next = TycoonParams {
            mu_schedule: MuSchedule::Explicit(v),
            ..params.clone()
        };
        next.validate().map_err(fail)?;
        *params = next;
        Ok(())
    })
}

/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_deriv(p: *mut TycoonParamsHandle, method: TycoonDeriv) -> TycoonStatus {
    guard(|| {
        params_mut(p)?.deriv_method = match method {
            TycoonDeriv::Spectral => DerivMethod::Spectral,
            TycoonDeriv::FiniteDifference => DerivMethod::FiniteDifference,
        };
        Ok(())
    })
}

/// Known noise standard deviation for stage selection; a negative value
/// clears it.
///
/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_noise_std(p: *mut TycoonParamsHandle, value: f64) -> TycoonStatus {
    guard(|| {
        let params = params_mut(p)?;
        if value.is_nan() {
            set_error("noise std is NaN");
            return Err(TycoonStatus::InvalidArgument);
        }
        params.noise_std = (value >= 0.0).then_some(value);
        Ok(())
    })
}

/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn tycoon_params_set_seed(p: *mut TycoonParamsHandle, seed: u64) -> TycoonStatus {
    guard(|| {
        params_mut(p)?.seed = seed;
        Ok(())
    })
}

/// Run the solver on `len` samples spaced `dt` apart. A null `params`
/// uses the defaults. On success `*out` owns a new representation.
///
/// # Safety
/// `signal` must point to `len` doubles; `params` must be null or live;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tycoon_solve(
    signal: *const f64,
    len: usize,
    dt: f64,
    params: *const TycoonParamsHandle,
    out: *mut *mut TycoonTfr,
) -> TycoonStatus {
    guard(|| {
        let f = signal_from(signal, len, dt)?;
        let defaults = TycoonParams::default();
        let p = params.as_ref().map_or(&defaults, |h| &h.inner);
        let r = tycoon(&f, p).map_err(fail)?;
        write_out(
            out,
            TycoonTfr {
                tfr: r.f,
                alpha: Some(r.alpha),
                chosen_mu_tilde: r.chosen_mu_tilde,
            },
        )
    })
}

/// Gaussian-window STFT with standard deviation `sigma` seconds.
///
/// # Safety
/// `signal` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tycoon_stft(
    signal: *const f64,
    len: usize,
    dt: f64,
    sigma: f64,
    out: *mut *mut TycoonTfr,
) -> TycoonStatus {
    guard(|| {
        let f = signal_from(signal, len, dt)?;
        let grid = TFGrid::for_signal(&f).map_err(fail)?;
        let w = WindowSpec::new(sigma).map_err(fail)?;
        let tfr = stft_gauss(&f, &w, &grid).map_err(fail)?;
        write_out(
            out,
            TycoonTfr {
                tfr,
                alpha: None,
                chosen_mu_tilde: f64::NAN,
            },
        )
    })
}

/// Synchrosqueezed Gaussian STFT with the default relative threshold.
///
/// # Safety
/// `signal` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tycoon_sst(
    signal: *const f64,
    len: usize,
    dt: f64,
    sigma: f64,
    out: *mut *mut TycoonTfr,
) -> TycoonStatus {
    guard(|| {
        let f = signal_from(signal, len, dt)?;
        let grid = TFGrid::for_signal(&f).map_err(fail)?;
        let w = WindowSpec::new(sigma).map_err(fail)?;
        let tfr = sst_stft(&f, &w, &grid, None).map_err(fail)?;
        write_out(
            out,
            TycoonTfr {
                tfr,
                alpha: None,
                chosen_mu_tilde: f64::NAN,
            },
        )
    })
}

/// # Safety
/// `t` must be null or a live representation.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_rows(t: *const TycoonTfr) -> usize {
    t.as_ref().map_or(0, |t| t.tfr.grid().rows())
}

/// # Safety
/// `t` must be null or a live representation.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_cols(t: *const TycoonTfr) -> usize {
    t.as_ref().map_or(0, |t| t.tfr.grid().cols())
}

/// # Safety
/// `t` must be null or a live representation.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_dt(t: *const TycoonTfr) -> f64 {
    t.as_ref().map_or(f64::NAN, |t| t.tfr.grid().dt())
}

/// # Safety
/// `t` must be null or a live representation.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_dw(t: *const TycoonTfr) -> f64 {
    t.as_ref().map_or(f64::NAN, |t| t.tfr.grid().dw())
}

/// Selected `mu_tilde` for solver output, NaN for baselines.
///
/// # Safety
/// `t` must be null or a live representation.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_chosen_mu_tilde(t: *const TycoonTfr) -> f64 {
    t.as_ref().map_or(f64::NAN, |t| t.chosen_mu_tilde)
}

/// Copy the values into `re` and `im`, each of length `rows * cols`.
///
/// # Safety
/// `t` must be live; `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_copy_values(
    t: *const TycoonTfr,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> TycoonStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("tfr"))?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let values = t.tfr.values();
        if len != values.len() {
            set_error(format!("buffer holds {len} values, matrix has {}", values.len()));
            return Err(TycoonStatus::ShapeMismatch);
        }
        for (k, z) in values.iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

/// Length of the chirp track, 0 for baseline output.
///
/// # Safety
/// `t` must be null or a live representation.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_alpha_len(t: *const TycoonTfr) -> usize {
    t.as_ref().and_then(|t| t.alpha.as_ref()).map_or(0, |a| a.len())
}

/// # Safety
/// `t` must be live; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_copy_alpha(t: *const TycoonTfr, out: *mut f64, len: usize) -> TycoonStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("tfr"))?;
        let Some(alpha) = &t.alpha else {
            set_error("representation has no chirp track");
            return Err(TycoonStatus::InvalidArgument);
        };
        if out.is_null() {
            return Err(null("output buffer"));
        }
        if len != alpha.len() {
            set_error(format!("buffer holds {len} values, track has {}", alpha.len()));
            return Err(TycoonStatus::ShapeMismatch);
        }
        ptr::copy_nonoverlapping(alpha.values().as_ptr(), out, len);
        Ok(())
    })
}

unsafe fn path_from<'a>(path: *const c_char) -> Result<&'a Path, TycoonStatus> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path).to_str().map(Path::new).map_err(|_| {
        set_error("path is not valid UTF-8");
        TycoonStatus::InvalidArgument
    })
}

/// Write the representation in the binary TFR format.
///
/// # Safety
/// `t` must be live; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_write(t: *const TycoonTfr, path: *const c_char) -> TycoonStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("tfr"))?;
        write_tfr(path_from(path)?, &t.tfr).map_err(fail)
    })
}

/// Read a binary TFR file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_read(path: *const c_char, out: *mut *mut TycoonTfr) -> TycoonStatus {
    guard(|| {
        let tfr = read_tfr(path_from(path)?).map_err(fail)?;
        write_out(
            out,
            TycoonTfr {
                tfr,
                alpha: None,
                chosen_mu_tilde: f64::NAN,
            },
        )
    })
}

/// # Safety
/// `t` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tycoon_tfr_free(t: *mut TycoonTfr) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// 1-D optimal-transport distance between two histograms summing to 1.
///
/// # Safety
/// `p` and `q` must each point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tycoon_ot1d(
    p: *const f64,
    q: *const f64,
    len: usize,
    bin_width: f64,
    out: *mut f64,
) -> TycoonStatus {
    guard(|| {
        let (p, q) = (slice(p, len, "p")?, slice(q, len, "q")?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ot1d(p, q, bin_width).map_err(fail)?;
        Ok(())
    })
}

//! C ABI over the twinreg pipeline.
//!
//! Frames and fits are opaque handles created by `twinreg_frame_from_*` and
//! `twinreg_ols_fit` and released by the matching `*_free`. Every fallible call returns a
//! [`TwinregStatus`]; on failure the message is retrievable with
//! [`twinreg_last_error`] on the same thread. Strings returned to the caller
//! must be released with [`twinreg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twinreg::data::{load_frame, ModelFrame};
use twinreg::kernels::student_t_sf2;
use twinreg::ols::{build_design, fit_ols, OlsFit};
use twinreg::pipeline::{run_analysis, AnalysisConfig, Sections};
use twinreg::report::{render_report, Format};
use twinreg::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinregStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Domain = 5,
    SingularDesign = 6,
    InsufficientData = 7,
    OutOfRange = 8,
    Panic = 9,
}

/// Parsed and transformed quarterly data.
pub struct TwinregFrame {
    frame: ModelFrame,
}

/// A fitted OLS model.
pub struct TwinregOls {
    fit: OlsFit,
    names: Vec<CString>,
}

/// One row of the coefficient table.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TwinregCoef {
    pub estimate: f64,
    pub std_error: f64,
    pub statistic: f64,
    pub p_value: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TwinregStatus {
    match e {
        Error::Io(_) => TwinregStatus::Io,
        Error::Parse { .. } | Error::UnknownFormat(_) => TwinregStatus::Parse,
        Error::SingularDesign { .. } => TwinregStatus::SingularDesign,
        Error::InsufficientData { .. } => TwinregStatus::InsufficientData,
        _ => TwinregStatus::Domain,
    }
}

fn fail(status: TwinregStatus, msg: &str) -> TwinregStatus {
    set_error(msg);
    status
}

/// Run `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), TwinregStatus>>(f: F) -> TwinregStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TwinregStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(TwinregStatus::Panic, "internal panic"),
    }
}

fn lib_err(e: Error) -> TwinregStatus {
    fail(status_of(&e), &e.to_string())
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), TwinregStatus> {
    if p.is_null() {
        Err(fail(TwinregStatus::NullArgument, &format!("`{what}` is null")))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next twinreg call on the same thread.
#[no_mangle]
pub extern "C" fn twinreg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn twinreg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Load the quarterly CSV at `path` into a new frame.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twinreg_frame_from_csv(path: *const c_char, out: *mut *mut TwinregFrame) -> TwinregStatus {
    guard(|| {
        non_null(path, "path")?;
        non_null(out, "out")?;
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| fail(TwinregStatus::InvalidUtf8, "path is not valid UTF-8"))?;
        let file = File::open(path).map_err(|e| fail(TwinregStatus::Io, &format!("cannot open {path}: {e}")))?;
        let frame = load_frame(file).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(TwinregFrame { frame }));
        Ok(())
    })
}

/// Load quarterly CSV text held in memory.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn twinreg_frame_from_buffer(
    data: *const u8,
    len: usize,
    out: *mut *mut TwinregFrame,
) -> TwinregStatus {
    guard(|| {
        non_null(data, "data")?;
        non_null(out, "out")?;
        let bytes = std::slice::from_raw_parts(data, len);
        let frame = load_frame(bytes).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(TwinregFrame { frame }));
        Ok(())
    })
}

/// # Safety
/// `frame` must come from a twinreg constructor and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn twinreg_frame_free(frame: *mut TwinregFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Number of complete rows, or 0 for a null frame.
///
/// # Safety
/// `frame` must be null or a live frame handle.
#[no_mangle]
pub unsafe extern "C" fn twinreg_frame_rows(frame: *const TwinregFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.frame.len())
}

/// Fit the seven-regressor OLS model.
///
/// # Safety
/// `frame` must be a live frame handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twinreg_ols_fit(frame: *const TwinregFrame, out: *mut *mut TwinregOls) -> TwinregStatus {
    guard(|| {
        non_null(frame, "frame")?;
        non_null(out, "out")?;
        let design = build_design(&(*frame).frame).map_err(lib_err)?;
        let fit = fit_ols(&design).map_err(lib_err)?;
        let names = fit
            .coef
            .iter()
            .map(|c| CString::new(c.term.as_str()).expect("term names have no NUL"))
            .collect();
        *out = Box::into_raw(Box::new(TwinregOls { fit, names }));
        Ok(())
    })
}

/// # Safety
/// `ols` must come from [`twinreg_ols_fit`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn twinreg_ols_free(ols: *mut TwinregOls) {
    if !ols.is_null() {
        drop(Box::from_raw(ols));
    }
}

/// Number of coefficients including the intercept, or 0 for a null handle.
///
/// # Safety
/// `ols` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn twinreg_ols_term_count(ols: *const TwinregOls) -> usize {
    ols.as_ref().map_or(0, |o| o.fit.coef.len())
}

/// Term name at `index`; owned by the handle. Null when out of range.
///
/// # Safety
/// `ols` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn twinreg_ols_term_name(ols: *const TwinregOls, index: usize) -> *const c_char {
    ols.as_ref()
        .and_then(|o| o.names.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Coefficient row at `index` (0 is the intercept).
///
/// # Safety
/// `ols` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twinreg_ols_term(
    ols: *const TwinregOls,
    index: usize,
    out: *mut TwinregCoef,
) -> TwinregStatus {
    guard(|| {
        non_null(ols, "ols")?;
        non_null(out, "out")?;
        let ols = &*ols;
        let row = ols
            .fit
            .coef
            .get(index)
            .ok_or_else(|| fail(TwinregStatus::OutOfRange, &format!("term index {index} out of range")))?;
        *out = TwinregCoef {
            estimate: row.estimate,
            std_error: row.std_error,
            statistic: row.t_stat,
            p_value: row.p_value,
        };
        Ok(())
    })
}

/// Adjusted R², or NaN for a null handle.
///
/// # Safety
/// `ols` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn twinreg_ols_adj_r2(ols: *const TwinregOls) -> f64 {
    ols.as_ref().map_or(f64::NAN, |o| o.fit.adj_r2)
}

/// Full JSON report (all sections) with default thresholds.
/// The string is written to `out` and must be released with [`twinreg_string_free`].
///
/// # Safety
/// `frame` must be a live frame handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twinreg_report_json(
    frame: *const TwinregFrame,
    seed: u64,
    draws: usize,
    out: *mut *mut c_char,
) -> TwinregStatus {
    guard(|| {
        non_null(frame, "frame")?;
        non_null(out, "out")?;
        let cfg = AnalysisConfig {
            seed,
            draws,
            ..AnalysisConfig::default()
        };
        let report = run_analysis(&(*frame).frame, &cfg, &Sections::all()).map_err(lib_err)?;
        let json = render_report(&report, Format::Json).map_err(lib_err)?;
        *out = into_c_string(json);
        Ok(())
    })
}

/// # Safety
/// `s` must come from a twinreg call that hands over ownership. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn twinreg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Two-sided Student t tail probability P(|T| ≥ |t|).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn twinreg_student_t_sf2(t: f64, df: f64, out: *mut f64) -> TwinregStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = student_t_sf2(t, df).map_err(lib_err)?;
        Ok(())
    })
}

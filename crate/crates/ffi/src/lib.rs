//! C ABI for the isometry-analysis toolkit: opaque analysis handles,
//! status codes, and JSON accessors so other languages can bind without
//! touching Rust types.
//!
//! Ownership rules: every `*mut HsAnalysis` produced by an `hs_analyze_*`
//! call is released with [`hs_analysis_free`]; strings returned by
//! accessors are borrowed from the handle and remain valid until the
//! handle is freed. `hs_version` and `hs_status_message` return static
//! storage.

use homsym::killing_closure::ClosureMode;
use homsym::lie_core::BianchiType;
use homsym::report::{analyze, AnalysisRequest, MetricChoice, Source};
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum HsStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    InternalError = 3,
}

/// Opaque analysis result.
pub struct HsAnalysis {
    json: CString,
    d_total: i32,
    extra_count: i32,
    gauge_rank: i32,
    inner_dim: i32,
}

fn status_of(e: &homsym::Error) -> HsStatus {
    match e {
        homsym::Error::Verification(_) | homsym::Error::JacobiViolation => {
            HsStatus::VerificationFailed
        }
        homsym::Error::Inconsistent(_) | homsym::Error::IterationCap(_) => {
            HsStatus::InternalError
        }
        _ => HsStatus::InvalidInput,
    }
}

unsafe fn cstr<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    CStr::from_ptr(p).to_str().ok()
}

fn run_request(req: AnalysisRequest, out: *mut *mut HsAnalysis) -> HsStatus {
    let result = catch_unwind(AssertUnwindSafe(|| analyze(&req)));
    match result {
        Ok(Ok(report)) => {
            let json = match serde_json::to_string_pretty(&report) {
                Ok(j) => j,
                Err(_) => return HsStatus::InternalError,
            };
            let json = match CString::new(json) {
                Ok(c) => c,
                Err(_) => return HsStatus::InternalError,
            };
            let handle = Box::new(HsAnalysis {
                json,
                d_total: report.d_total as i32,
                extra_count: report.extra_count as i32,
                gauge_rank: report.gauge_rank as i32,
                inner_dim: report.inner_dim as i32,
            });
            unsafe { *out = Box::into_raw(handle) };
            HsStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => HsStatus::InternalError,
    }
}

fn mode_for(symbolic: bool, seed: u64) -> ClosureMode {
    if symbolic {
        ClosureMode::Symbolic
    } else {
        ClosureMode::Sampled { samples: 3, seed }
    }
}

/// Analyze a catalog type on its pattern-generic metric.
///
/// `type_name` is one of `I..IX`; `q` is an optional rational string (may
/// be null) required exactly for types VI and VII.
///
/// # Safety
/// `type_name` must be a valid NUL-terminated string, `q` null or the
/// same, and `out` a valid location for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_analyze_type(
    type_name: *const c_char,
    q: *const c_char,
    symbolic: bool,
    seed: u64,
    out: *mut *mut HsAnalysis,
) -> HsStatus {
    if out.is_null() {
        return HsStatus::InvalidInput;
    }
    *out = std::ptr::null_mut();
    let Some(name) = cstr(type_name) else {
        return HsStatus::InvalidInput;
    };
    let Ok(ty) = BianchiType::from_str(name) else {
        return HsStatus::InvalidInput;
    };
    let q = match cstr(q) {
        None => None,
        Some(text) => match homsym::lie_core::parse_value(text) {
            Ok(v) => Some(v),
            Err(_) => return HsStatus::InvalidInput,
        },
    };
    let req = AnalysisRequest {
        source: Source::Catalog { ty, q },
        metric: MetricChoice::Generic,
        mode: mode_for(symbolic, seed),
        seed,
        tolerance: 1e-9,
    };
    run_request(req, out)
}

/// Analyze custom structure constants given in the JSON file format
/// (`{"n": ..., "entries": [{"A":..,"B":..,"C":..,"value":".."}]}`), on
/// the fully generic symmetric metric.
///
/// # Safety
/// `constants_json` must be a valid NUL-terminated string and `out` a
/// valid location for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_analyze_constants_json(
    constants_json: *const c_char,
    symbolic: bool,
    seed: u64,
    out: *mut *mut HsAnalysis,
) -> HsStatus {
    if out.is_null() {
        return HsStatus::InvalidInput;
    }
    *out = std::ptr::null_mut();
    let Some(json) = cstr(constants_json) else {
        return HsStatus::InvalidInput;
    };
    let req = AnalysisRequest {
        source: Source::Constants {
            json: json.to_string(),
            label: "ffi".into(),
        },
        metric: MetricChoice::Generic,
        mode: mode_for(symbolic, seed),
        seed,
        tolerance: 1e-9,
    };
    run_request(req, out)
}

/// Borrowed pointer to the full JSON report; valid until the handle is
/// freed. Null if the handle is null.
///
/// # Safety
/// `a` must be null or a live handle from an `hs_analyze_*` call.
#[no_mangle]
pub unsafe extern "C" fn hs_analysis_json(a: *const HsAnalysis) -> *const c_char {
    match a.as_ref() {
        Some(h) => h.json.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Total isometry-algebra dimension, or -1 on a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_analysis_d_total(a: *const HsAnalysis) -> i32 {
    a.as_ref().map(|h| h.d_total).unwrap_or(-1)
}

/// Count of induced Killing fields beyond homogeneity, or -1 on null.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_analysis_extra_count(a: *const HsAnalysis) -> i32 {
    a.as_ref().map(|h| h.extra_count).unwrap_or(-1)
}

/// Rank of the inner gauge action on the metric, or -1 on null.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_analysis_gauge_rank(a: *const HsAnalysis) -> i32 {
    a.as_ref().map(|h| h.gauge_rank).unwrap_or(-1)
}

/// Dimension of the inner automorphism algebra, or -1 on null.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_analysis_inner_dim(a: *const HsAnalysis) -> i32 {
    a.as_ref().map(|h| h.inner_dim).unwrap_or(-1)
}

/// Release a handle. Null is a no-op.
///
/// # Safety
/// `a` must be null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_analysis_free(a: *mut HsAnalysis) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Crate version as a static string.
#[no_mangle]
pub extern "C" fn hs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn hs_status_message(status: HsStatus) -> *const c_char {
    let msg: &'static str = match status {
        HsStatus::Ok => "ok\0",
        HsStatus::VerificationFailed => "verification failed\0",
        HsStatus::InvalidInput => "invalid input\0",
        HsStatus::InternalError => "internal error\0",
    };
    msg.as_ptr() as *const c_char
}

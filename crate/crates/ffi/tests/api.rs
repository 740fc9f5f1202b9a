//! Exercise the C entry points through the Rust side of the ABI.

use homsym_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn analyze(ty: &str, q: Option<&str>) -> (HsStatus, *mut HsAnalysis) {
    let ty = CString::new(ty).unwrap();
    let q_c = q.map(|s| CString::new(s).unwrap());
    let mut out: *mut HsAnalysis = ptr::null_mut();
    let status = unsafe {
        hs_analyze_type(
            ty.as_ptr(),
            q_c.as_ref().map(|c| c.as_ptr()).unwrap_or(ptr::null()),
            false,
            7,
            &mut out,
        )
    };
    (status, out)
}

#[test]
fn analyze_type_iii_through_c_abi() {
    let (status, handle) = analyze("III", None);
    assert_eq!(status, HsStatus::Ok);
    unsafe {
        assert_eq!(hs_analysis_d_total(handle), 4);
        assert_eq!(hs_analysis_extra_count(handle), 1);
        assert_eq!(hs_analysis_gauge_rank(handle), 2);
        assert_eq!(hs_analysis_inner_dim(handle), 2);
        let json = hs_analysis_json(handle);
        assert!(!json.is_null());
        let text = CStr::from_ptr(json).to_str().unwrap();
        assert!(text.contains("\"d_total\": 4"));
        hs_analysis_free(handle);
    }
}

#[test]
fn analyze_family_type_with_q() {
    let (status, handle) = analyze("VII", Some("0"));
    assert_eq!(status, HsStatus::Ok);
    unsafe {
        assert_eq!(hs_analysis_d_total(handle), 3);
        hs_analysis_free(handle);
    }
}

#[test]
fn invalid_inputs_are_reported() {
    let (status, handle) = analyze("X", None);
    assert_eq!(status, HsStatus::InvalidInput);
    assert!(handle.is_null());

    // VI without q.
    let (status, handle) = analyze("VI", None);
    assert_eq!(status, HsStatus::InvalidInput);
    assert!(handle.is_null());

    // Null out-pointer.
    let ty = CString::new("I").unwrap();
    let status =
        unsafe { hs_analyze_type(ty.as_ptr(), ptr::null(), false, 7, ptr::null_mut()) };
    assert_eq!(status, HsStatus::InvalidInput);
}

#[test]
fn custom_constants_match_catalog() {
    // Type IX constants under a different name must give the same counts
    // (the format stores B < C entries only, so C^2_31 = 1 enters as
    // C^2_13 = -1).
    let json = r#"{"n":3,"entries":[
        {"A":1,"B":2,"C":3,"value":"1"},
        {"A":2,"B":1,"C":3,"value":"-1"},
        {"A":3,"B":1,"C":2,"value":"1"}]}"#;
    let c = CString::new(json).unwrap();
    let mut out: *mut HsAnalysis = ptr::null_mut();
    let status = unsafe { hs_analyze_constants_json(c.as_ptr(), false, 7, &mut out) };
    assert_eq!(status, HsStatus::Ok);
    unsafe {
        assert_eq!(hs_analysis_d_total(out), 3);
        assert_eq!(hs_analysis_gauge_rank(out), 3);
        hs_analysis_free(out);
    }
}

#[test]
fn jacobi_violations_fail_verification() {
    let json = r#"{"n":3,"entries":[
        {"A":1,"B":2,"C":3,"value":"1"},
        {"A":2,"B":1,"C":3,"value":"-1"},
        {"A":3,"B":1,"C":2,"value":"1"},
        {"A":1,"B":1,"C":2,"value":"1"}]}"#;
    let c = CString::new(json).unwrap();
    let mut out: *mut HsAnalysis = ptr::null_mut();
    let status = unsafe { hs_analyze_constants_json(c.as_ptr(), false, 7, &mut out) };
    assert_eq!(status, HsStatus::VerificationFailed);
    assert!(out.is_null());
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        assert!(hs_analysis_json(ptr::null()).is_null());
        assert_eq!(hs_analysis_d_total(ptr::null()), -1);
        hs_analysis_free(ptr::null_mut());
    }
}

#[test]
fn static_strings() {
    unsafe {
        let v = CStr::from_ptr(hs_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
        let m = CStr::from_ptr(hs_status_message(HsStatus::InvalidInput))
            .to_str()
            .unwrap();
        assert_eq!(m, "invalid input");
    }
}

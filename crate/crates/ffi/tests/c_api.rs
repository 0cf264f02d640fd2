use std::ffi::{CStr, CString};
use std::ptr;

use torus_tangency_ffi::*;

fn parse(s: &str) -> *mut TtCurve {
    let t = CString::new(s).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { tt_curve_parse(t.as_ptr(), &mut c) }, TtStatus::Ok);
    assert!(!c.is_null());
    c
}

fn take(s: *mut std::ffi::c_char) -> serde_json::Value {
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { tt_string_free(s) };
    v
}

#[test]
fn degrees_and_analysis() {
    let c = parse("x^2*y + y^2 + 3*x + 1");
    let (mut t, mut dx, mut dy) = (0, 0, 0);
    assert_eq!(unsafe { tt_curve_degree(c, &mut t, &mut dx, &mut dy) }, TtStatus::Ok);
    assert_eq!((t, dx, dy), (3, 2, 2));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tt_curve_analyze(c, &mut out) }, TtStatus::Ok);
    let v = take(out);
    assert_eq!(v["curve"]["delta"], "3");
    unsafe { tt_curve_free(c) };
}

#[test]
fn parse_error_sets_message() {
    let t = CString::new("x + + ").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { tt_curve_parse(t.as_ptr(), &mut c) }, TtStatus::InvalidInput);
    assert!(c.is_null());
    let msg = unsafe { CStr::from_ptr(tt_last_error()) }.to_str().unwrap().to_string();
    assert!(msg.contains("syntax"), "{msg}");
}

#[test]
fn null_handles_rejected() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tt_curve_analyze(ptr::null(), &mut out) }, TtStatus::NullPointer);
    assert_eq!(unsafe { tt_curve_parse(ptr::null(), ptr::null_mut()) }, TtStatus::NullPointer);
    unsafe { tt_curve_free(ptr::null_mut()) };
    unsafe { tt_string_free(ptr::null_mut()) };
}

#[test]
fn translate_is_reported() {
    let c = parse("x*y - 2");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tt_curve_scan(c, 2, TtTarget::Unit, 0, false, &mut out) }, TtStatus::TranslateOfSubtorus);
    assert!(out.is_null());
    unsafe { tt_curve_free(c) };
}

#[test]
fn scan_serial_matches_parallel() {
    let c = parse("x^2 + y^2 - 2*x*y - x - y");
    let mut a = ptr::null_mut();
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { tt_curve_scan(c, 3, TtTarget::TorsionUpTo, 6, false, &mut a) }, TtStatus::Ok);
    assert_eq!(unsafe { tt_curve_scan(c, 3, TtTarget::TorsionUpTo, 6, true, &mut b) }, TtStatus::Ok);
    assert_eq!(take(a), take(b));
    unsafe { tt_curve_free(c) };
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/torus_tangency.h")).unwrap();
    for name in ["tt_curve_parse", "tt_curve_report", "tt_last_error", "TtCurve", "TT_STATUS_OK"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

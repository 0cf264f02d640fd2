//! C interface. Curves are opaque handles; results come back as JSON strings
//! owned by the caller and released with `tt_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;
use torus_tangency::poly::SparsePoly;
use torus_tangency::report::{analyze, dehn_exclusion_report, singular_report};
use torus_tangency::tangency::{slope_scan, Execution, Target};
use torus_tangency::Error;

/// Status returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtStatus {
    Ok = 0,
    Internal = 1,
    InvalidInput = 2,
    TranslateOfSubtorus = 3,
    Uncertified = 4,
    PrecisionExhausted = 5,
    NullPointer = 6,
}

/// Scan target selector for `tt_curve_scan`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtTarget {
    Unit = 0,
    TorsionUpTo = 1,
    AnyTranslate = 2,
}

/// Opaque curve handle.
pub struct TtCurve {
    poly: SparsePoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TtStatus {
    match e.exit_code() {
        3 => TtStatus::TranslateOfSubtorus,
        4 => TtStatus::Uncertified,
        5 => TtStatus::PrecisionExhausted,
        _ => TtStatus::InvalidInput,
    }
}

fn guard<F: FnOnce() -> Result<(), TtStatus>>(f: F) -> TtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TtStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TtStatus::Internal
        }
    }
}

fn fail(e: Error) -> TtStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn curve_ref<'a>(c: *const TtCurve) -> Result<&'a TtCurve, TtStatus> {
    if c.is_null() {
        set_error("null curve handle");
        return Err(TtStatus::NullPointer);
    }
    Ok(&*c)
}

unsafe fn write_json(v: &Value, out: *mut *mut c_char) -> Result<(), TtStatus> {
    let s = serde_json::to_string(v).map_err(|_| TtStatus::Internal)?;
    let c = CString::new(s).map_err(|_| TtStatus::Internal)?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T) -> Result<(), TtStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(TtStatus::NullPointer);
    }
    Ok(())
}

/// Parses a polynomial in x and y. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_curve_parse(text: *const c_char, out: *mut *mut TtCurve) -> TtStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        if text.is_null() {
            set_error("null polynomial text");
            return Err(TtStatus::NullPointer);
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("polynomial text is not UTF-8");
            TtStatus::InvalidInput
        })?;
        let poly: SparsePoly = s.trim().parse().map_err(|e: Error| fail(e))?;
        *out = Box::into_raw(Box::new(TtCurve { poly }));
        Ok(())
    })
}

/// Releases a handle from `tt_curve_parse`. Null is ignored.
///
/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tt_curve_free(c: *mut TtCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Total, x and y degrees of the curve.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_curve_degree(c: *const TtCurve, total: *mut u32, dx: *mut u32, dy: *mut u32) -> TtStatus {
    guard(|| {
        let c = curve_ref(c)?;
        check_out(total)?;
        check_out(dx)?;
        check_out(dy)?;
        *total = c.poly.total_degree();
        *dx = c.poly.degree_x();
        *dy = c.poly.degree_y();
        Ok(())
    })
}

/// Degrees, height and bounds as JSON.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_curve_analyze(c: *const TtCurve, out: *mut *mut c_char) -> TtStatus {
    guard(|| {
        check_out(out)?;
        let c = curve_ref(c)?;
        let v = analyze(&c.poly).map_err(fail)?;
        write_json(&v, out)
    })
}

/// Singular intersections for all slopes with max(|p|,|q|) <= `radius`.
/// `order` is read only for `TorsionUpTo`.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_curve_scan(
    c: *const TtCurve,
    radius: i64,
    target: TtTarget,
    order: u64,
    parallel: bool,
    out: *mut *mut c_char,
) -> TtStatus {
    guard(|| {
        check_out(out)?;
        let c = curve_ref(c)?;
        let target = match target {
            TtTarget::Unit => Target::Unit,
            TtTarget::TorsionUpTo => Target::TorsionUpTo(order),
            TtTarget::AnyTranslate => Target::AnyTranslate,
        };
        let r = slope_scan(&c.poly, radius, target, exec(parallel)).map_err(fail)?;
        write_json(&r.to_json(), out)
    })
}

/// Slope exclusion report. Returns `Uncertified` with the report still
/// written when an audit fails.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_curve_report(c: *const TtCurve, radius: i64, order: u64, parallel: bool, out: *mut *mut c_char) -> TtStatus {
    guard(|| {
        check_out(out)?;
        let c = curve_ref(c)?;
        let r = dehn_exclusion_report(&c.poly, radius, order, exec(parallel)).map_err(fail)?;
        write_json(&r.to_json(), out)?;
        if r.audits_passed() {
            Ok(())
        } else {
            set_error("height audit failed");
            Err(TtStatus::Uncertified)
        }
    })
}

/// Singular points of the curve in the torus with their branch tangents.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_curve_singular(c: *const TtCurve, out: *mut *mut c_char) -> TtStatus {
    guard(|| {
        check_out(out)?;
        let c = curve_ref(c)?;
        let v = singular_report(&c.poly).map_err(fail)?;
        write_json(&v, out)
    })
}

/// Frees a string returned through an `out` parameter. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

fn exec(parallel: bool) -> Execution {
    if parallel {
        Execution::Parallel
    } else {
        Execution::Serial
    }
}

//! C ABI over `kwalg`. Objects are opaque handles owned by the caller and
//! released with the matching `*_free`. Every call returns a [`KwStatus`];
//! on failure `kw_last_error` gives a message for the calling thread.
//! Panics are caught at the boundary and reported as `KW_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kwalg::expr::{parse_bundle, parse_element};
use kwalg::kw::{kw_bracket as kw_bracket_of, kw_eval as kw_eval_of, kw_wedge as kw_wedge_of, MultiBracket};
use kwalg::verify::{check_closure, check_courant, check_filippov, Bound};
use kwalg::{Bundle, BundleSpec, Error, GradedElement};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KwStatus {
    Ok = 0,
    /// A verification ran and found a failing case.
    VerificationFailed = 1,
    NullPointer = 2,
    InvalidUtf8 = 3,
    SyntaxError = 4,
    IndexOutOfRange = 5,
    InvalidBundle = 6,
    /// Operands on different bundles.
    BundleMismatch = 7,
    /// Wrong degree, arity or argument kind.
    InvalidArgument = 8,
    Panic = 9,
}

/// Which identities `kw_verify` checks.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KwCheck {
    Courant = 0,
    Closure = 1,
    Filippov = 2,
}

/// A vector bundle with its metric.
pub struct KwBundle(Bundle);

/// An element of the graded Poisson algebra.
pub struct KwElement(GradedElement);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> KwStatus {
    match err {
        Error::Syntax { .. } => KwStatus::SyntaxError,
        Error::IndexOutOfRange { .. } | Error::UnknownCoordinate(_) => KwStatus::IndexOutOfRange,
        Error::InvalidBundle(_) => KwStatus::InvalidBundle,
        Error::BundleMismatch => KwStatus::BundleMismatch,
        _ => KwStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> KwStatus {
    set_error(&err.to_string());
    status_of(&err)
}

/// Runs `f` with panics caught and errors recorded.
fn guard(f: impl FnOnce() -> Result<KwStatus, KwStatus>) -> KwStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            KwStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, KwStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(KwStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        KwStatus::InvalidUtf8
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, KwStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        KwStatus::NullPointer
    })
}

unsafe fn out_ptr<'a, T>(out: *mut *mut T) -> Result<&'a mut *mut T, KwStatus> {
    match out.as_mut() {
        Some(o) => {
            *o = ptr::null_mut();
            Ok(o)
        }
        None => {
            set_error("null output pointer");
            Err(KwStatus::NullPointer)
        }
    }
}

fn give<T>(out: &mut *mut T, value: T) -> Result<KwStatus, KwStatus> {
    *out = Box::into_raw(Box::new(value));
    Ok(KwStatus::Ok)
}

fn element_out(out: &mut *mut KwElement, r: kwalg::Result<GradedElement>) -> Result<KwStatus, KwStatus> {
    give(out, KwElement(r.map_err(fail)?))
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn kw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Identity metric on a bundle of rank `r` over `d` base coordinates.
#[no_mangle]
pub unsafe extern "C" fn kw_bundle_identity(d: usize, r: usize, out: *mut *mut KwBundle) -> KwStatus {
    guard(|| give(out_ptr(out)?, KwBundle(BundleSpec::identity(d, r).into_bundle())))
}

/// Split metric of rank `2d` over `d` base coordinates.
#[no_mangle]
pub unsafe extern "C" fn kw_bundle_split(d: usize, out: *mut *mut KwBundle) -> KwStatus {
    guard(|| give(out_ptr(out)?, KwBundle(BundleSpec::split(d).into_bundle())))
}

/// Parses a bundle file (`d = ..`, `r = ..`, `g = [..]`).
#[no_mangle]
pub unsafe extern "C" fn kw_bundle_parse(text: *const c_char, out: *mut *mut KwBundle) -> KwStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let spec = parse_bundle(str_arg(text)?).map_err(fail)?;
        give(out, KwBundle(spec.into_bundle()))
    })
}

#[no_mangle]
pub unsafe extern "C" fn kw_bundle_free(bundle: *mut KwBundle) {
    if !bundle.is_null() {
        drop(Box::from_raw(bundle));
    }
}

/// Parses an expression such as `-1/2*x1*xi1*xi2 + p1` on `bundle`.
#[no_mangle]
pub unsafe extern "C" fn kw_element_parse(bundle: *const KwBundle, text: *const c_char, out: *mut *mut KwElement) -> KwStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let b = handle(bundle)?;
        element_out(out, parse_element(str_arg(text)?, &b.0))
    })
}

#[no_mangle]
pub unsafe extern "C" fn kw_element_free(element: *mut KwElement) {
    if !element.is_null() {
        drop(Box::from_raw(element));
    }
}

/// Canonical text of an element; release with `kw_string_free`.
#[no_mangle]
pub unsafe extern "C" fn kw_element_render(element: *const KwElement, out: *mut *mut c_char) -> KwStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let text = handle(element)?.0.to_string();
        *out = CString::new(text).expect("no interior nul").into_raw();
        Ok(KwStatus::Ok)
    })
}

/// 1 when the elements are equal, 0 otherwise or on null handles.
#[no_mangle]
pub unsafe extern "C" fn kw_element_equal(a: *const KwElement, b: *const KwElement) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => i32::from(a.0 == b.0),
        _ => 0,
    }
}

#[no_mangle]
pub unsafe extern "C" fn kw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The Poisson bracket `{a, b}`.
#[no_mangle]
pub unsafe extern "C" fn kw_pbracket(a: *const KwElement, b: *const KwElement, out: *mut *mut KwElement) -> KwStatus {
    guard(|| {
        let out = out_ptr(out)?;
        element_out(out, kwalg::pbracket(&handle(a)?.0, &handle(b)?.0))
    })
}

fn bracket_of(e: &KwElement) -> Result<MultiBracket, KwStatus> {
    MultiBracket::from_theta(e.0.clone()).map_err(fail)
}

/// Generator of the bracket of the brackets generated by `a` and `b`.
#[no_mangle]
pub unsafe extern "C" fn kw_bracket(a: *const KwElement, b: *const KwElement, out: *mut *mut KwElement) -> KwStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let (a, b) = (bracket_of(handle(a)?)?, bracket_of(handle(b)?)?);
        element_out(out, kw_bracket_of(&a, &b).map(MultiBracket::into_theta))
    })
}

/// Generator of the wedge product of the brackets generated by `a` and `b`.
#[no_mangle]
pub unsafe extern "C" fn kw_wedge(a: *const KwElement, b: *const KwElement, out: *mut *mut KwElement) -> KwStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let (a, b) = (bracket_of(handle(a)?)?, bracket_of(handle(b)?)?);
        element_out(out, kw_wedge_of(&a, &b).map(MultiBracket::into_theta))
    })
}

/// The bracket generated by `theta` of degree `n` on `n - 1` sections.
#[no_mangle]
pub unsafe extern "C" fn kw_eval(
    theta: *const KwElement,
    args: *const *const KwElement,
    nargs: usize,
    out: *mut *mut KwElement,
) -> KwStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let c = bracket_of(handle(theta)?)?;
        let mut sections = Vec::with_capacity(nargs);
        if nargs > 0 {
            if args.is_null() {
                set_error("null argument array");
                return Err(KwStatus::NullPointer);
            }
            for k in 0..nargs {
                sections.push(handle(*args.add(k))?.0.clone());
            }
        }
        element_out(out, kw_eval_of(&c, &sections))
    })
}

/// Checks `which` for the bracket generated by `theta` on tuples of total
/// x-degree at most `degree_bound`. Returns `KW_STATUS_OK` when every check
/// passes and `KW_STATUS_VERIFICATION_FAILED` otherwise; in both cases
/// `report` receives one `CHECK ..` line per check (release with
/// `kw_string_free`). `report` may be null.
#[no_mangle]
pub unsafe extern "C" fn kw_verify(theta: *const KwElement, which: KwCheck, degree_bound: u32, report: *mut *mut c_char) -> KwStatus {
    guard(|| {
        if let Some(r) = report.as_mut() {
            *r = ptr::null_mut();
        }
        let theta = &handle(theta)?.0;
        let bound = Bound::Degree(degree_bound);
        let result = match which {
            KwCheck::Courant => check_courant(theta, bound),
            KwCheck::Closure => check_closure(&bracket_of(&KwElement(theta.clone()))?, bound),
            KwCheck::Filippov => check_filippov(&bracket_of(&KwElement(theta.clone()))?, bound),
        }
        .map_err(fail)?;
        if let Some(r) = report.as_mut() {
            *r = CString::new(result.render_machine()).expect("no interior nul").into_raw();
        }
        if result.passed() {
            Ok(KwStatus::Ok)
        } else {
            set_error("verification failed");
            Ok(KwStatus::VerificationFailed)
        }
    })
}

//! C ABI for the cantordiff engine.
//!
//! Elements are passed as opaque handles; addresses, clopen sets and
//! results cross the boundary as NUL-terminated strings in the same
//! textual grammars the CLI uses. Every fallible function returns a
//! `CdStatus`; on failure a thread-local message is available through
//! `cd_last_error` until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use cantordiff::dynamics::{self, InfiniteWitness, OrderResult};
use cantordiff::subgroup;
use cantordiff::text::{
    format_address, format_clopen, format_element, parse_address, parse_clopen, parse_element,
};
use cantordiff::{Element, Error};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdStatus {
    Ok = 0,
    /// Input text failed to parse or violated an invariant.
    InvalidInput = 1,
    /// A resource bound (cell depth, cap) was hit.
    ResourceLimit = 2,
    /// A required pointer argument was NULL.
    NullArgument = 3,
    /// Argument text was not valid UTF-8.
    InvalidUtf8 = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> CdStatus {
    match err {
        Error::DepthExceeded { .. } => CdStatus::ResourceLimit,
        _ => CdStatus::InvalidInput,
    }
}

/// Opaque element handle.
pub struct CdElement(Element);

unsafe fn arg_str<'a>(p: *const c_char) -> Result<&'a str, CdStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(CdStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        CdStatus::InvalidUtf8
    })
}

unsafe fn arg_element<'a>(p: *const CdElement) -> Result<&'a Element, CdStatus> {
    if p.is_null() {
        set_error("null element handle");
        return Err(CdStatus::NullArgument);
    }
    Ok(&(*p).0)
}

fn return_element(out: *mut *mut CdElement, e: Element) -> CdStatus {
    if out.is_null() {
        set_error("null output pointer");
        return CdStatus::NullArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(CdElement(e))) };
    CdStatus::Ok
}

fn return_string(out: *mut *mut c_char, s: String) -> CdStatus {
    if out.is_null() {
        set_error("null output pointer");
        return CdStatus::NullArgument;
    }
    let c = CString::new(s.replace('\0', " ")).unwrap();
    unsafe { *out = c.into_raw() };
    CdStatus::Ok
}

/// Message for the most recent failure on this thread. The pointer is
/// valid until the next cantordiff call on the same thread.
#[no_mangle]
pub extern "C" fn cd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse an element from its textual grammar, e.g.
/// `n=2; 0->00, 10->01, 11->1`. The handle must be released with
/// `cd_element_free`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_element_parse(
    text: *const c_char,
    out: *mut *mut CdElement,
) -> CdStatus {
    let text = match arg_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_element(text.trim()) {
        Ok(e) => return_element(out, e),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Canonical text of an element; free the result with `cd_string_free`.
///
/// # Safety
/// `element` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cd_element_format(
    element: *const CdElement,
    out: *mut *mut c_char,
) -> CdStatus {
    let e = match arg_element(element) {
        Ok(e) => e,
        Err(s) => return s,
    };
    return_string(out, format_element(e))
}

/// # Safety
/// Both operands must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cd_element_compose(
    g: *const CdElement,
    f: *const CdElement,
    max_cell_depth: usize,
    out: *mut *mut CdElement,
) -> CdStatus {
    let (g, f) = match (arg_element(g), arg_element(f)) {
        (Ok(g), Ok(f)) => (g, f),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match g.compose_with_depth(f, max_cell_depth) {
        Ok(e) => return_element(out, e),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cd_element_inverse(
    g: *const CdElement,
    out: *mut *mut CdElement,
) -> CdStatus {
    let g = match arg_element(g) {
        Ok(g) => g,
        Err(s) => return s,
    };
    return_element(out, g.inverse())
}

/// Apply an element to an address such as `0(1)`; returns the image
/// address.
///
/// # Safety
/// `g` must be a live handle, `address` a valid string.
#[no_mangle]
pub unsafe extern "C" fn cd_element_apply(
    g: *const CdElement,
    address: *const c_char,
    out: *mut *mut c_char,
) -> CdStatus {
    let g = match arg_element(g) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let text = match arg_str(address) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let x = match parse_address(text.trim(), g.arity()) {
        Ok(x) => x,
        Err(e) => {
            set_error(&e.to_string());
            return status_of(&e);
        }
    };
    match g.apply(&x) {
        Ok(y) => return_string(out, format_address(&y)),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Exact derivative at an address, rendered as `p/q`.
///
/// # Safety
/// `g` must be a live handle, `address` a valid string.
#[no_mangle]
pub unsafe extern "C" fn cd_element_derivative(
    g: *const CdElement,
    address: *const c_char,
    out: *mut *mut c_char,
) -> CdStatus {
    let g = match arg_element(g) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let text = match arg_str(address) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let x = match parse_address(text.trim(), g.arity()) {
        Ok(x) => x,
        Err(e) => {
            set_error(&e.to_string());
            return status_of(&e);
        }
    };
    match dynamics::derivative_at(g, &x) {
        Ok(d) => return_string(out, d.to_string()),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Fixed-point set as a JSON string:
/// `{"clopen": "...", "isolated": [["0(1)", "1/3"], ...]}`.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cd_element_fixed_points(
    g: *const CdElement,
    out: *mut *mut c_char,
) -> CdStatus {
    let g = match arg_element(g) {
        Ok(g) => g,
        Err(s) => return s,
    };
    let fs = dynamics::fixed_points(g);
    let isolated: Vec<String> = fs
        .isolated
        .iter()
        .map(|(p, d)| format!("[\"{}\", \"{}\"]", format_address(p), d))
        .collect();
    return_string(
        out,
        format!(
            "{{\"clopen\": \"{}\", \"isolated\": [{}]}}",
            format_clopen(&fs.clopen_part),
            isolated.join(", ")
        ),
    )
}

/// Order of an element as a JSON string. `rounds` bounds the periodic
/// set stabilization; returns ResourceLimit when the order stays
/// unknown.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cd_element_order(
    g: *const CdElement,
    rounds: u32,
    max_cell_depth: usize,
    out: *mut *mut c_char,
) -> CdStatus {
    let g = match arg_element(g) {
        Ok(g) => g,
        Err(s) => return s,
    };
    match dynamics::order_with_depth(g, rounds.max(1), max_cell_depth) {
        OrderResult::Finite(k) => {
            return_string(out, format!("{{\"kind\": \"finite\", \"value\": {k}}}"))
        }
        OrderResult::Infinite(w) => {
            let witness = match w {
                InfiniteWitness::Hyperbolic { power, point, derivative } => format!(
                    "{{\"kind\": \"hyperbolic\", \"power\": {power}, \"point\": \"{}\", \"derivative\": \"{derivative}\"}}",
                    format_address(&point)
                ),
                InfiniteWitness::NonPeriodic { power, point } => format!(
                    "{{\"kind\": \"non_periodic\", \"power\": {power}, \"point\": \"{}\"}}",
                    format_address(&point)
                ),
            };
            return_string(
                out,
                format!("{{\"kind\": \"infinite\", \"witness\": {witness}}}"),
            )
        }
        OrderResult::Unknown { reason } => {
            set_error(&reason);
            CdStatus::ResourceLimit
        }
    }
}

/// Verify a positive ping-pong certificate on clopen sets written in the
/// `{00, 01}` grammar; writes 1 (verified) or 0 to `out`.
///
/// # Safety
/// Handles must be live, set texts valid strings.
#[no_mangle]
pub unsafe extern "C" fn cd_pingpong_verify(
    h1: *const CdElement,
    h2: *const CdElement,
    set_a: *const c_char,
    set_b: *const c_char,
    out: *mut i32,
) -> CdStatus {
    let (h1, h2) = match (arg_element(h1), arg_element(h2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let (ta, tb) = match (arg_str(set_a), arg_str(set_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    if out.is_null() {
        set_error("null output pointer");
        return CdStatus::NullArgument;
    }
    let parse = |t: &str| parse_clopen(t.trim(), h1.arity());
    match (parse(ta), parse(tb)) {
        (Ok(a), Ok(b)) => match subgroup::pingpong_verify(h1, h2, &a, &b) {
            Ok(v) => {
                *out = v as i32;
                CdStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        },
        (Err(e), _) | (_, Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Release an element handle. NULL is accepted.
///
/// # Safety
/// `element` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cd_element_free(element: *mut CdElement) {
    if !element.is_null() {
        drop(Box::from_raw(element));
    }
}

/// Release a string returned by this library. NULL is accepted.
///
/// # Safety
/// `s` must be NULL or a string from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Stable check that the library is loaded; returns the crate version.
#[no_mangle]
pub extern "C" fn cd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    unsafe fn parse(text: &str) -> *mut CdElement {
        let c = CString::new(text).unwrap();
        let mut out: *mut CdElement = ptr::null_mut();
        assert_eq!(cd_element_parse(c.as_ptr(), &mut out), CdStatus::Ok);
        out
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        cd_string_free(p);
        s
    }

    #[test]
    fn parse_format_roundtrip() {
        unsafe {
            let g = parse("n=2; 0->00, 10->01, 11->1");
            let mut text: *mut c_char = ptr::null_mut();
            assert_eq!(cd_element_format(g, &mut text), CdStatus::Ok);
            assert_eq!(take_string(text), "n=2; 0->00, 10->01, 11->1");
            cd_element_free(g);
        }
    }

    #[test]
    fn parse_error_sets_message() {
        unsafe {
            let c = CString::new("n=2; 0->00, 1->01").unwrap();
            let mut out: *mut CdElement = ptr::null_mut();
            assert_eq!(cd_element_parse(c.as_ptr(), &mut out), CdStatus::InvalidInput);
            let msg = CStr::from_ptr(cd_last_error()).to_str().unwrap();
            assert!(msg.contains("missing 1"), "{msg}");
        }
    }

    #[test]
    fn compose_apply_and_derivative() {
        unsafe {
            let g = parse("n=2; 0->00, 10->01, 11->1");
            let mut gg: *mut CdElement = ptr::null_mut();
            assert_eq!(cd_element_compose(g, g, 64, &mut gg), CdStatus::Ok);
            let addr = CString::new("1(0)").unwrap();
            let mut img: *mut c_char = ptr::null_mut();
            assert_eq!(cd_element_apply(g, addr.as_ptr(), &mut img), CdStatus::Ok);
            assert_eq!(take_string(img), "01(0)");
            let zero = CString::new("(0)").unwrap();
            let mut d: *mut c_char = ptr::null_mut();
            assert_eq!(cd_element_derivative(g, zero.as_ptr(), &mut d), CdStatus::Ok);
            assert_eq!(take_string(d), "1/3");
            cd_element_free(gg);
            cd_element_free(g);
        }
    }

    #[test]
    fn order_and_fixed_points() {
        unsafe {
            let g = parse("n=2; 0->00, 10->01, 11->1");
            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(cd_element_order(g, 8, 64, &mut json), CdStatus::Ok);
            let text = take_string(json);
            assert!(text.contains("\"infinite\""), "{text}");
            let mut fp: *mut c_char = ptr::null_mut();
            assert_eq!(cd_element_fixed_points(g, &mut fp), CdStatus::Ok);
            let text = take_string(fp);
            assert!(text.contains("1/3") && text.contains("(1)"), "{text}");
            cd_element_free(g);
        }
    }

    #[test]
    fn pingpong_through_ffi() {
        unsafe {
            let h1 = parse("n=2; 0->00, 10->01, 11->1");
            let h2 = parse("n=2; 0->01, 10->00, 11->1");
            let a = CString::new("{00}").unwrap();
            let b = CString::new("{01}").unwrap();
            let mut ok: i32 = -1;
            assert_eq!(
                cd_pingpong_verify(h1, h2, a.as_ptr(), b.as_ptr(), &mut ok),
                CdStatus::Ok
            );
            assert_eq!(ok, 1);
            cd_element_free(h1);
            cd_element_free(h2);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut out: *mut CdElement = ptr::null_mut();
            assert_eq!(cd_element_parse(ptr::null(), &mut out), CdStatus::NullArgument);
            assert_eq!(cd_element_inverse(ptr::null(), &mut out), CdStatus::NullArgument);
            cd_element_free(ptr::null_mut());
            cd_string_free(ptr::null_mut());
        }
    }
}

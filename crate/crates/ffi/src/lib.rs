//! C ABI for `ratsos`.
//!
//! Problems and certificates are opaque handles created by the `*_parse` and
//! `ratsos_descend` functions and released with the matching `*_free`.
//! Every fallible call returns a [`RatsosStatus`]; on failure a description
//! is available from [`ratsos_last_error`] on the same thread. Strings
//! returned to the caller are NUL-terminated UTF-8 and must be released with
//! [`ratsos_string_free`].
//!
//! Handles are not synchronized: a handle may move between threads but must
//! not be used from two threads at once.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ratsos::descent::{descend, reconstruct_target, verify, DescentError, DescentOptions, Verdict};
use ratsos::foursquare::{rational_square_sum, FourSquareError};
use ratsos::textio::{self, ParseErrorKind};
use ratsos::{Certificate, FieldError, SosProblem};

/// Result codes; the numeric values match the `ratsos` CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatsosStatus {
    Ok = 0,
    /// The certificate does not prove the problem's polynomial.
    Reject = 1,
    /// Malformed problem, certificate or literal.
    ParseError = 2,
    /// Field not totally real, minimal polynomial not squarefree, sum not
    /// rational, stated target wrong, or a negative value for `foursquare`.
    Precondition = 3,
    /// Null pointer or otherwise invalid argument.
    InvalidArgument = 4,
    /// A bug in the library (caught panic).
    Internal = 5,
}

/// Opaque problem handle.
pub struct RatsosProblem {
    problem: SosProblem,
}

/// Opaque certificate handle.
pub struct RatsosCertificate {
    cert: Certificate,
}

/// Sizes of a certificate.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RatsosCounts {
    /// Number of weighted terms.
    pub terms: usize,
    /// Whether the certificate carries pure squares.
    pub expanded: bool,
    /// Number of pure squares; 0 unless `expanded`.
    pub squares: usize,
    /// `(4r - 3) m` for degree `r` and `m` input squares.
    pub bound: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Failure = (RatsosStatus, String);

fn guard(f: impl FnOnce() -> Result<RatsosStatus, Failure>) -> RatsosStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            RatsosStatus::Internal
        }
    }
}

fn invalid(what: &str) -> Failure {
    (RatsosStatus::InvalidArgument, format!("{what} is null or invalid"))
}

unsafe fn text_arg<'a>(text: *const c_char, what: &str) -> Result<&'a [u8], Failure> {
    if text.is_null() {
        return Err(invalid(what));
    }
    Ok(CStr::from_ptr(text).to_bytes())
}

fn parse_failure(e: textio::ParseError) -> Failure {
    let status = match e.kind {
        ParseErrorKind::Field(FieldError::NotSquarefree { .. }) => RatsosStatus::Precondition,
        _ => RatsosStatus::ParseError,
    };
    (status, e.to_string())
}

fn descent_failure(e: DescentError) -> Failure {
    let status = if e.is_precondition() { RatsosStatus::Precondition } else { RatsosStatus::Internal };
    (status, e.to_string())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("printed text has no NUL").into_raw()
}

/// Parses a problem file. On success stores a new handle in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ratsos_problem_parse(text: *const c_char, out: *mut *mut RatsosProblem) -> RatsosStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = ptr::null_mut();
        let bytes = text_arg(text, "text")?;
        let problem = textio::parse_problem_bytes(bytes).map_err(parse_failure)?;
        *out = Box::into_raw(Box::new(RatsosProblem { problem }));
        Ok(RatsosStatus::Ok)
    })
}

/// # Safety
/// `problem` must be null or a handle from [`ratsos_problem_parse`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ratsos_problem_free(problem: *mut RatsosProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Degree of the problem's field, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ratsos_problem_degree(problem: *const RatsosProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.problem.field().degree())
}

/// Number of input squares, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ratsos_problem_inputs(problem: *const RatsosProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.problem.squares().len())
}

/// Computes a rational certificate. `compress` merges input squares with
/// equal traces; `expand` adds pure squares.
///
/// # Safety
/// `problem` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ratsos_descend(
    problem: *const RatsosProblem,
    expand: bool,
    compress: bool,
    out: *mut *mut RatsosCertificate,
) -> RatsosStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = ptr::null_mut();
        let p = problem.as_ref().ok_or_else(|| invalid("problem"))?;
        let opts = DescentOptions { compress, expand, parallel: false };
        let cert = descend(&p.problem, opts).map_err(descent_failure)?;
        *out = Box::into_raw(Box::new(RatsosCertificate { cert }));
        Ok(RatsosStatus::Ok)
    })
}

/// Parses a certificate file. On success stores a new handle in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ratsos_certificate_parse(
    text: *const c_char,
    out: *mut *mut RatsosCertificate,
) -> RatsosStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = ptr::null_mut();
        let bytes = text_arg(text, "text")?;
        let cert = textio::parse_certificate_bytes(bytes).map_err(parse_failure)?;
        *out = Box::into_raw(Box::new(RatsosCertificate { cert }));
        Ok(RatsosStatus::Ok)
    })
}

/// Canonical text of a certificate, or null for a null handle. Release with
/// [`ratsos_string_free`].
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ratsos_certificate_print(cert: *const RatsosCertificate) -> *mut c_char {
    match cert.as_ref() {
        Some(c) => into_c_string(textio::print_certificate(&c.cert)),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `cert` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ratsos_certificate_counts(
    cert: *const RatsosCertificate,
    out: *mut RatsosCounts,
) -> RatsosStatus {
    guard(|| {
        let c = &cert.as_ref().ok_or_else(|| invalid("cert"))?.cert;
        let out = out.as_mut().ok_or_else(|| invalid("out"))?;
        *out = RatsosCounts {
            terms: c.weighted_count(),
            expanded: c.expanded.is_some(),
            squares: c.expanded_count().unwrap_or(0),
            bound: c.bound(),
        };
        Ok(RatsosStatus::Ok)
    })
}

/// # Safety
/// `cert` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ratsos_certificate_free(cert: *mut RatsosCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Checks `cert` against the polynomial of `problem`: `Ok` on accept,
/// `Reject` (with the first differing monomial in the last error) otherwise.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ratsos_verify(
    problem: *const RatsosProblem,
    cert: *const RatsosCertificate,
) -> RatsosStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| invalid("problem"))?;
        let c = cert.as_ref().ok_or_else(|| invalid("cert"))?;
        let target = reconstruct_target(&p.problem).map_err(descent_failure)?;
        match verify(&target, &c.cert) {
            Verdict::Accept => Ok(RatsosStatus::Ok),
            Verdict::Reject(why) => Err((RatsosStatus::Reject, why.to_string())),
        }
    })
}

/// Writes the rational literal `value` as a sum of the fewest rational
/// squares, e.g. `"7 = 2^2 + 1^2 + 1^2 + 1^2"`, into a new string `*out`.
///
/// # Safety
/// `value` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ratsos_foursquare(value: *const c_char, out: *mut *mut c_char) -> RatsosStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = ptr::null_mut();
        let bytes = text_arg(value, "value")?;
        let text = textio::decode_utf8(bytes).map_err(parse_failure)?;
        let c = textio::parse_rational(text).map_err(parse_failure)?;
        let parts = rational_square_sum(&c).map_err(|e| match e {
            FourSquareError::NonPositive(_) => (RatsosStatus::Precondition, e.to_string()),
            FourSquareError::TooLarge(_) => (RatsosStatus::ParseError, e.to_string()),
        })?;
        *out = into_c_string(parts.to_string());
        Ok(RatsosStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ratsos_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ratsos_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

//! C ABI over the `spinorbit` crate.
//!
//! Elements are opaque heap handles released with
//! [`spinorbit_element_free`]; strings returned through `char **` are
//! released with [`spinorbit_string_free`]. Every function returns a
//! [`SpinorbitStatus`]; on failure [`spinorbit_last_error`] describes the
//! most recent error on the calling thread. Output pointers are written only
//! on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spinorbit::models::{Catalog, CatalogKey, ModelError};
use spinorbit::opalg::{Bindings, Element, OpAlgError};
use spinorbit::spectral::{closed_form_energy, fd_spectrum, Branch, Params, RadialProblem};
use spinorbit::verifier::{run_suite, SuiteId};
use spinorbit::Error;

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinorbitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    UnknownKey = 5,
    MissingParameter = 6,
    Domain = 7,
    UnknownSuite = 8,
    Internal = 9,
}

/// Spin-orbit branch: `j = l + ½` or `j = l − ½`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinorbitBranch {
    Plus = 0,
    Minus = 1,
}

impl From<SpinorbitBranch> for Branch {
    fn from(b: SpinorbitBranch) -> Branch {
        match b {
            SpinorbitBranch::Plus => Branch::Plus,
            SpinorbitBranch::Minus => Branch::Minus,
        }
    }
}

/// Opaque operator handle.
pub struct SpinorbitElement {
    inner: Element,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SpinorbitStatus, String);

fn algebra_status(e: &OpAlgError) -> SpinorbitStatus {
    match e {
        OpAlgError::Parse(_) | OpAlgError::CoordinateOutOfRange { .. } => SpinorbitStatus::Parse,
        OpAlgError::DimensionMismatch { .. } => SpinorbitStatus::DimensionMismatch,
        OpAlgError::InvalidDimension(_) => SpinorbitStatus::Domain,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match &e {
            Error::Algebra(a) | Error::Model(ModelError::Algebra(a)) => algebra_status(a),
            Error::Model(ModelError::UnknownKey(_)) => SpinorbitStatus::UnknownKey,
            Error::Model(ModelError::MissingParameter { .. }) => SpinorbitStatus::MissingParameter,
            Error::UnknownSuite(_) => SpinorbitStatus::UnknownSuite,
            _ => SpinorbitStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

impl From<OpAlgError> for Failure {
    fn from(e: OpAlgError) -> Failure {
        Error::from(e).into()
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Failure {
        Error::from(e).into()
    }
}

impl From<spinorbit::spectral::SpectralError> for Failure {
    fn from(e: spinorbit::spectral::SpectralError) -> Failure {
        Error::from(e).into()
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SpinorbitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpinorbitStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SpinorbitStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SpinorbitStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SpinorbitStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_element<'a>(p: *const SpinorbitElement, what: &str) -> Result<&'a Element, Failure> {
    p.as_ref().map(|e| &e.inner).ok_or_else(|| null(what))
}

unsafe fn write_element(out: *mut *mut SpinorbitElement, e: Element) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(SpinorbitElement { inner: e }));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure(SpinorbitStatus::Internal, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_value<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = v;
    Ok(())
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn spinorbit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse the multi-line or one-line text form of an element.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_element_parse(text: *const c_char, out: *mut *mut SpinorbitElement) -> SpinorbitStatus {
    guard(|| {
        let e = Element::parse(read_str(text, "text")?)?;
        write_element(out, e)
    })
}

/// Multi-line text form; free with `spinorbit_string_free`.
///
/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_element_to_string(e: *const SpinorbitElement, out: *mut *mut c_char) -> SpinorbitStatus {
    guard(|| write_string(out, read_element(e, "element")?.to_string()))
}

/// Release a handle; NULL is ignored.
///
/// # Safety
/// `e` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_element_free(e: *mut SpinorbitElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Release a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Normally ordered product `a · b`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_element_mul(
    a: *const SpinorbitElement,
    b: *const SpinorbitElement,
    out: *mut *mut SpinorbitElement,
) -> SpinorbitStatus {
    guard(|| {
        let p = read_element(a, "a")?.try_mul(read_element(b, "b")?)?;
        write_element(out, p)
    })
}

/// `[a, b] = ab − ba`
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_element_commutator(
    a: *const SpinorbitElement,
    b: *const SpinorbitElement,
    out: *mut *mut SpinorbitElement,
) -> SpinorbitStatus {
    guard(|| {
        let c = read_element(a, "a")?.commutator(read_element(b, "b")?)?;
        write_element(out, c)
    })
}

/// Formal adjoint.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_element_adjoint(a: *const SpinorbitElement, out: *mut *mut SpinorbitElement) -> SpinorbitStatus {
    guard(|| write_element(out, read_element(a, "a")?.adjoint()))
}

/// Writes 1 if `a` is the zero operator, else 0.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_element_is_zero(a: *const SpinorbitElement, out: *mut i32) -> SpinorbitStatus {
    guard(|| write_value(out, i32::from(read_element(a, "a")?.is_zero())))
}

/// Substitute rational parameters given as `"hbar=1/2,gamma=3"`.
///
/// # Safety
/// `a` must be a live handle, `bindings` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_element_substitute(
    a: *const SpinorbitElement,
    bindings: *const c_char,
    out: *mut *mut SpinorbitElement,
) -> SpinorbitStatus {
    guard(|| {
        let b: Bindings = read_str(bindings, "bindings")?.parse()?;
        write_element(out, read_element(a, "a")?.substitute_params(&b))
    })
}

/// Build a catalog operator from a key such as `"X_1"` or
/// `"A2M_RAW[hbar=1,gamma=1/2,m=0]"`.
///
/// # Safety
/// `key` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_catalog_build(key: *const c_char, out: *mut *mut SpinorbitElement) -> SpinorbitStatus {
    guard(|| {
        let key: CatalogKey = read_str(key, "key")?.parse()?;
        let e = Catalog::global().get(&key)?;
        write_element(out, (*e).clone())
    })
}

/// Run one suite; writes the JSON report (free with
/// `spinorbit_string_free`) and 1 or 0 to `pass_out`.
///
/// # Safety
/// `suite` must be NUL-terminated; `json_out`, `pass_out` writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_verify_suite(
    suite: *const c_char,
    json_out: *mut *mut c_char,
    pass_out: *mut i32,
) -> SpinorbitStatus {
    guard(|| {
        if json_out.is_null() || pass_out.is_null() {
            return Err(null("out"));
        }
        let id: SuiteId = read_str(suite, "suite")?.parse()?;
        let mut report = run_suite(id)?;
        report.strip_timings();
        let json = serde_json_report(&report);
        write_value(pass_out, i32::from(report.pass))?;
        write_string(json_out, json)
    })
}

fn serde_json_report(report: &spinorbit::verifier::SuiteReport) -> String {
    spinorbit::verifier::Report::new(vec![report.clone()]).to_json()
}

/// Closed-form bound energy `−α²/(2ħ²N²)` of level `(n, 2j, branch)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_closed_form_energy(
    n: u32,
    two_j: u32,
    branch: SpinorbitBranch,
    hbar: f64,
    alpha: f64,
    gamma: f64,
    out: *mut f64,
) -> SpinorbitStatus {
    guard(|| {
        let e = closed_form_energy(n, two_j, branch.into(), &Params { hbar, alpha, gamma })?;
        write_value(out, e)
    })
}

/// Richardson-extrapolated finite-difference energy of level `n` in the
/// `(branch, l)` sector on `points` and `2·points` cells.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spinorbit_fd_level(
    branch: SpinorbitBranch,
    l: u32,
    n: u32,
    hbar: f64,
    alpha: f64,
    gamma: f64,
    points: usize,
    out: *mut f64,
) -> SpinorbitStatus {
    guard(|| {
        let p = RadialProblem::new(branch.into(), l, Params { hbar, alpha, gamma })?.with_grid(None, points)?;
        let res = fd_spectrum(&p, n + 1, true)?;
        let level = res
            .levels
            .get(n as usize)
            .ok_or_else(|| Failure(SpinorbitStatus::Domain, format!("level {n} is not bound in the box")))?;
        write_value(out, level.energy_fd)
    })
}

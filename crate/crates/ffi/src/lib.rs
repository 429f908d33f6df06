//! C interface to `tubenull`.
//!
//! Specs come in as JSON text and live behind opaque handles; reports go
//! out as JSON strings owned by the library and released with
//! [`tn_string_free`]. Every call returns a [`TnStatus`]; on failure the
//! message is available from [`tn_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tubenull::boxcount::box_count_ifs;
use tubenull::budget::Budget;
use tubenull::carpet::CarpetSpec;
use tubenull::cover::{count_freq_words, generate_cover, verify_cover, TubeCover};
use tubenull::error::Error;
use tubenull::fourier::r0_certificate;
use tubenull::ifs::HomIfsSpec;
use tubenull::io::{schema_of, Document};
use tubenull::projection::{wsc_check, Direction};

/// Status codes; the nonzero values match the command-line exit codes
/// where the two overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TnStatus {
    Ok = 0,
    /// The computation ran but the property did not hold (e.g. a cover
    /// with an uncovered cylinder). The report is still returned.
    VerifyFailed = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    Panic = 5,
}

/// A digit-restricted carpet.
pub struct TnCarpet {
    spec: CarpetSpec,
}

/// A homogeneous self-similar system.
pub struct TnIfs {
    spec: HomIfsSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TnStatus {
    match e {
        Error::BudgetExceeded { .. } | Error::Overflow { .. } => TnStatus::BudgetExceeded,
        _ => TnStatus::InvalidInput,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<TnStatus, Fail>) -> TnStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            TnStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            TnStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::Parse(format!("{what} is not valid UTF-8"))))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

fn budget(limit: u64) -> Budget {
    if limit == 0 {
        Budget::default()
    } else {
        Budget::new(limit)
    }
}

fn emit(json: String, out: &mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(json).map_err(|_| Fail::Lib(Error::Parse("report contains NUL".into())))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn tn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a `carpet.v1` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_carpet_from_json(json: *const c_char, out: *mut *mut TnCarpet) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let spec = CarpetSpec::from_json(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(TnCarpet { spec }));
        Ok(TnStatus::Ok)
    })
}

/// # Safety
/// `c` must be NULL or a handle from [`tn_carpet_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tn_carpet_free(c: *mut TnCarpet) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Parses an `ifs.v1` or `carpet.v1` document into a system.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_ifs_from_json(json: *const c_char, out: *mut *mut TnIfs) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let json = text(json, "json")?;
        let spec = match schema_of(json)?.as_deref() {
            Some("carpet.v1") => CarpetSpec::from_json(json)?.to_ifs(),
            _ => HomIfsSpec::from_json(json)?,
        };
        *out = Box::into_raw(Box::new(TnIfs { spec }));
        Ok(TnStatus::Ok)
    })
}

/// The system of a carpet, as a new handle.
///
/// # Safety
/// `c` must be a live carpet handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_carpet_to_ifs(c: *const TnCarpet, out: *mut *mut TnIfs) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(TnIfs {
            spec: handle(c, "carpet")?.spec.to_ifs(),
        }));
        Ok(TnStatus::Ok)
    })
}

/// # Safety
/// `f` must be NULL or a live system handle.
#[no_mangle]
pub unsafe extern "C" fn tn_ifs_free(f: *mut TnIfs) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of maps in the system, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live system handle.
#[no_mangle]
pub unsafe extern "C" fn tn_ifs_len(f: *const TnIfs) -> usize {
    f.as_ref().map_or(0, |f| f.spec.len())
}

/// Separation check of the projection along `v[0..dim]` up to depth
/// `depth`; writes a `wsc_report.v1` document. A `budget_limit` of 0 means the
/// default limit.
///
/// # Safety
/// `f` must be live, `v` must hold `dim` values, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_wsc_check(
    f: *const TnIfs,
    v: *const i64,
    dim: usize,
    depth: usize,
    budget_limit: u64,
    out: *mut *mut c_char,
) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let f = handle(f, "ifs")?;
        if v.is_null() {
            return Err(Fail::Null("v"));
        }
        let v = Direction::new(std::slice::from_raw_parts(v, dim).to_vec())?;
        let rep = wsc_check(&f.spec, &v, depth, budget(budget_limit))?;
        let status = if rep.integral { TnStatus::Ok } else { TnStatus::VerifyFailed };
        emit(rep.to_json(), out)?;
        Ok(status)
    })
}

/// Builds the depth-`depth` slab cover with exponent `s`; writes a
/// `cover.v1` document.
///
/// # Safety
/// `f` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_cover_generate(
    f: *const TnIfs,
    depth: usize,
    s: f64,
    budget_limit: u64,
    out: *mut *mut c_char,
) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let cover = generate_cover(&handle(f, "ifs")?.spec, depth, s, budget(budget_limit))?;
        emit(cover.to_json(), out)?;
        Ok(TnStatus::Ok)
    })
}

/// Checks a `cover.v1` document against every cylinder of depth `depth`
/// (the cover's own depth when 0); writes a `verify.v1` document and
/// returns `VerifyFailed` if some cylinder is uncovered.
///
/// # Safety
/// `f` must be live, `cover_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tn_cover_verify(
    f: *const TnIfs,
    cover_json: *const c_char,
    depth: usize,
    budget_limit: u64,
    out: *mut *mut c_char,
) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let f = handle(f, "ifs")?;
        let cover = TubeCover::from_json(text(cover_json, "cover_json")?)?;
        let depth = if depth == 0 { cover.depth } else { depth };
        let rep = verify_cover(&f.spec, &cover, depth, budget(budget_limit))?;
        let status = if rep.passed { TnStatus::Ok } else { TnStatus::VerifyFailed };
        emit(rep.to_json(), out)?;
        Ok(status)
    })
}

/// Fourier tail certificate for a carpet; writes an `r0_certificate.v1`
/// document.
///
/// # Safety
/// `c` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_r0_certificate(c: *const TnCarpet, out: *mut *mut c_char) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let cert = r0_certificate(&handle(c, "carpet")?.spec)?;
        emit(cert.to_json(), out)?;
        Ok(TnStatus::Ok)
    })
}

/// Number of length-`n` words over `m` letters with at least `t` copies
/// of a fixed letter; writes a `freq_count.v1` document.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tn_count_freq_words(m: usize, n: usize, t: usize, out: *mut *mut c_char) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        emit(count_freq_words(m, n, t)?.to_json(), out)?;
        Ok(TnStatus::Ok)
    })
}

/// Dyadic box counts at scales `2^-depths[i]`; writes a `boxcount.v1`
/// document.
///
/// # Safety
/// `f` must be live, `depths` must hold `len` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tn_box_count(
    f: *const TnIfs,
    depths: *const usize,
    len: usize,
    budget_limit: u64,
    out: *mut *mut c_char,
) -> TnStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let f = handle(f, "ifs")?;
        if depths.is_null() {
            return Err(Fail::Null("depths"));
        }
        let depths = std::slice::from_raw_parts(depths, len);
        emit(box_count_ifs(&f.spec, depths, budget(budget_limit))?.to_json(), out)?;
        Ok(TnStatus::Ok)
    })
}

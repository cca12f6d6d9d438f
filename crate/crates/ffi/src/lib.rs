//! C ABI over the `sperner` crate.
//!
//! Every fallible function returns an [`SpStatus`]; on failure a message is
//! available from [`sp_last_error`] on the same thread. Systems are opaque
//! [`SpSystem`] handles released with [`sp_system_free`]; strings returned by
//! the library are released with [`sp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use sperner::bounds::bounds;
use sperner::format::{parse, serialize_json, serialize_text};
use sperner::plan::{construct, Method};
use sperner::search::{search, SearchConfig, SearchOptions};
use sperner::{fixtures, verify_sperner, Error, PartitionSystem};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    UnknownFixture = 4,
    ConstructionFailed = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Opaque partition system.
pub struct SpSystem {
    inner: PartitionSystem,
}

/// Bounds on the maximum system size. Values above `UINT64_MAX` saturate and
/// set the matching flag.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SpBounds {
    pub lower: u64,
    pub upper: u64,
    pub lower_saturated: bool,
    pub upper_saturated: bool,
    pub exact: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SpSearchInfo {
    pub size: usize,
    pub proven_optimal: bool,
    pub nodes_explored: u64,
    pub elapsed_seconds: f64,
    pub candidates: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SpVerifyInfo {
    pub valid: bool,
    pub violations: usize,
    pub wellformed_errors: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> SpStatus {
    match err {
        Error::Parse(_) => SpStatus::Parse,
        Error::UnknownFixture(_) => SpStatus::UnknownFixture,
        Error::ConstructionFailed(_) | Error::BaseNotSperner | Error::NoInitialPartition(_) => {
            SpStatus::ConstructionFailed
        }
        _ => SpStatus::InvalidArgument,
    }
}

/// Clears the last error, runs `f`, records any failure and catches panics.
fn guard(f: impl FnOnce() -> Result<(), (SpStatus, String)>) -> SpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SpStatus::Panic
        }
    }
}

fn fail(err: Error) -> (SpStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (SpStatus, String) {
    (SpStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (SpStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn store_system(out: *mut *mut SpSystem, system: PartitionSystem) {
    *out = Box::into_raw(Box::new(SpSystem { inner: system }));
}

/// # Safety
/// `s` must be null or a live handle.
unsafe fn system_ref<'a>(s: *const SpSystem) -> Result<&'a PartitionSystem, (SpStatus, String)> {
    s.as_ref().map(|s| &s.inner).ok_or_else(|| null("system"))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next library call on the same thread.
#[no_mangle]
pub extern "C" fn sp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads an embedded fixture system by name (e.g. `"fig1"`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_fixture_load(name: *const c_char, out: *mut *mut SpSystem) -> SpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        let system = fixtures::system(name).map_err(fail)?;
        store_system(out, system);
        Ok(())
    })
}

/// Parses a JSON or plain-text system document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_parse(text: *const c_char, out: *mut *mut SpSystem) -> SpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(text, "text")?;
        let system = parse(text).map_err(|e| (SpStatus::Parse, e.to_string()))?;
        store_system(out, system);
        Ok(())
    })
}

/// Builds a verified system for `(n, k)`. `method` may be null for `"auto"`;
/// otherwise one of `k2`, `dev-2k1`, `dev-2k2`, `dev-3k1`, `latin-lift`, `extend`.
///
/// # Safety
/// `method` must be null or NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_construct(
    n: usize,
    k: usize,
    method: *const c_char,
    out: *mut *mut SpSystem,
) -> SpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let method = if method.is_null() {
            Method::Auto
        } else {
            read_str(method, "method")?
                .parse::<Method>()
                .map_err(|e| (SpStatus::InvalidArgument, e))?
        };
        let (system, _) = construct(n, k, method).map_err(fail)?;
        store_system(out, system);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `system` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sp_system_free(system: *mut SpSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Ground-set size, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_system_n(system: *const SpSystem) -> usize {
    system.as_ref().map_or(0, |s| s.inner.n())
}

/// Classes per partition, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_system_k(system: *const SpSystem) -> usize {
    system.as_ref().map_or(0, |s| s.inner.k())
}

/// Number of partitions, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_system_len(system: *const SpSystem) -> usize {
    system.as_ref().map_or(0, |s| s.inner.len())
}

/// Copies the elements of one class (ascending, 0-based) into `buf`.
/// `*len` receives the class size even when `cap` is too small, in which case
/// nothing is copied and `OutOfRange` is returned.
///
/// # Safety
/// `system` must be a live handle, `buf` valid for `cap` writes (may be null
/// when `cap` is 0), and `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_system_class(
    system: *const SpSystem,
    partition: usize,
    class: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> SpStatus {
    guard(|| {
        let s = system_ref(system)?;
        if len.is_null() {
            return Err(null("len"));
        }
        let set = s
            .partitions()
            .get(partition)
            .and_then(|p| p.classes().get(class))
            .ok_or_else(|| {
                (
                    SpStatus::OutOfRange,
                    format!("no class {class} in partition {partition}"),
                )
            })?;
        *len = set.len();
        if set.len() > cap {
            return Err((
                SpStatus::OutOfRange,
                format!("class has {} elements, buffer holds {cap}", set.len()),
            ));
        }
        if !set.is_empty() && buf.is_null() {
            return Err(null("buf"));
        }
        for (i, x) in set.iter().enumerate() {
            *buf.add(i) = x;
        }
        Ok(())
    })
}

/// Checks the Sperner property. A non-Sperner system is not an error.
///
/// # Safety
/// `system` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_verify(system: *const SpSystem, out: *mut SpVerifyInfo) -> SpStatus {
    guard(|| {
        let s = system_ref(system)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let report = verify_sperner(s);
        *out = SpVerifyInfo {
            valid: report.valid,
            violations: report.violations.len(),
            wellformed_errors: report.wellformed_errors.len(),
        };
        Ok(())
    })
}

fn into_c_string(text: String, out: *mut *mut c_char) -> Result<(), (SpStatus, String)> {
    let c = CString::new(text)
        .map_err(|_| (SpStatus::InvalidArgument, "output contains NUL".to_string()))?;
    // SAFETY: callers check `out` for null first.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Serialises to the JSON document format. Free the result with [`sp_string_free`].
///
/// # Safety
/// `system` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_serialize_json(
    system: *const SpSystem,
    out: *mut *mut c_char,
) -> SpStatus {
    guard(|| {
        let s = system_ref(system)?;
        if out.is_null() {
            return Err(null("out"));
        }
        into_c_string(serialize_json(s), out)
    })
}

/// Serialises to the plain-text format. Free the result with [`sp_string_free`].
///
/// # Safety
/// `system` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_serialize_text(
    system: *const SpSystem,
    out: *mut *mut c_char,
) -> SpStatus {
    guard(|| {
        let s = system_ref(system)?;
        if out.is_null() {
            return Err(null("out"));
        }
        into_c_string(serialize_text(s), out)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Best known lower and upper bounds for `(n, k)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_bounds(n: usize, k: usize, out: *mut SpBounds) -> SpStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let b = bounds(n, k).map_err(fail)?;
        let clamp = |v: u128| (u64::try_from(v).unwrap_or(u64::MAX), v > u64::MAX as u128);
        let (lower, lower_saturated) = clamp(b.lower);
        let (upper, upper_saturated) = clamp(b.upper);
        *out = SpBounds {
            lower,
            upper,
            lower_saturated,
            upper_saturated,
            exact: b.exact,
        };
        Ok(())
    })
}

/// Maximum-clique search over `k`-partitions of `0..n` with every class of at
/// least `min_class_size` elements. `time_limit_seconds <= 0` means no limit;
/// `target == 0` means no early stop. `best` may be null if the witness is not
/// wanted.
///
/// # Safety
/// `info` must be valid for writes; `best` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sp_search(
    n: usize,
    k: usize,
    min_class_size: usize,
    time_limit_seconds: f64,
    target: usize,
    info: *mut SpSearchInfo,
    best: *mut *mut SpSystem,
) -> SpStatus {
    guard(|| {
        let info = info.as_mut().ok_or_else(|| null("info"))?;
        let time_budget = (time_limit_seconds > 0.0)
            .then(|| Duration::try_from_secs_f64(time_limit_seconds))
            .transpose()
            .map_err(|e| (SpStatus::InvalidArgument, e.to_string()))?;
        let config = SearchConfig {
            min_class_size,
            symmetry: false,
            options: SearchOptions {
                time_budget,
                target: (target > 0).then_some(target),
            },
        };
        let outcome = search(n, k, &config).map_err(fail)?;
        *info = SpSearchInfo {
            size: outcome.size,
            proven_optimal: outcome.proven_optimal,
            nodes_explored: outcome.nodes_explored,
            elapsed_seconds: outcome.elapsed.as_secs_f64(),
            candidates: outcome.candidates,
        };
        if !best.is_null() {
            store_system(best, outcome.best);
        }
        Ok(())
    })
}

//! C ABI for the regchain library.
//!
//! All functions return an `RcStatus`; results are UTF-8 JSON strings
//! allocated by this library and released with `rc_string_free`. Systems
//! are opaque handles released with `rc_system_free`. On failure,
//! `rc_last_error` returns a message valid until the next call on the same
//! thread.

use regchain::poly::BigRat;
use regchain::report::{self, AppError, PrimeChoice};
use regchain::solve::SystemInput;
use regchain::sysfile;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::str::FromStr;

/// Status codes mirroring the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RcStatus {
    RcOk = 0,
    /// Null pointer or invalid UTF-8 argument.
    RcBadArgument = 1,
    RcParseError = 2,
    RcAssumptionFailure = 3,
    RcVerificationFailure = 4,
}

/// Opaque handle to a parsed polynomial system.
pub struct RcSystem {
    inner: SystemInput,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn status_of(err: &AppError) -> RcStatus {
    match err.exit_code() {
        2 => RcStatus::RcParseError,
        3 => RcStatus::RcAssumptionFailure,
        4 => RcStatus::RcVerificationFailure,
        _ => RcStatus::RcBadArgument,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, RcStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(RcStatus::RcBadArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        RcStatus::RcBadArgument
    })
}

fn emit(out: *mut *mut c_char, value: &serde_json::Value) -> RcStatus {
    if out.is_null() {
        set_error("null output pointer");
        return RcStatus::RcBadArgument;
    }
    let text = serde_json::to_string(value).unwrap();
    let c = CString::new(text).unwrap();
    unsafe {
        *out = c.into_raw();
    }
    RcStatus::RcOk
}

fn run_report(
    sys: *const RcSystem,
    out: *mut *mut c_char,
    f: impl Fn(&SystemInput) -> Result<serde_json::Value, AppError>,
) -> RcStatus {
    if sys.is_null() {
        set_error("null system handle");
        return RcStatus::RcBadArgument;
    }
    let sys = unsafe { &(*sys).inner };
    match f(sys) {
        Ok(v) => emit(out, &v),
        Err(AppError::Verification(report)) => {
            set_error("verification failed");
            let status = emit(out, &report);
            if status == RcStatus::RcOk {
                RcStatus::RcVerificationFailure
            } else {
                status
            }
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Last error message for this thread. Owned by the library; do not free.
#[no_mangle]
pub extern "C" fn rc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string returned by any report function.
#[no_mangle]
pub unsafe extern "C" fn rc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a system file (the `params`/`poly` format) into a handle.
#[no_mangle]
pub unsafe extern "C" fn rc_system_parse(
    text: *const c_char,
    out: *mut *mut RcSystem,
) -> RcStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    if out.is_null() {
        set_error("null output pointer");
        return RcStatus::RcBadArgument;
    }
    match sysfile::parse_system(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(RcSystem { inner }));
            RcStatus::RcOk
        }
        Err(e) => {
            set_error(&e.to_string());
            RcStatus::RcParseError
        }
    }
}

/// Releases a system handle.
#[no_mangle]
pub unsafe extern "C" fn rc_system_free(sys: *mut RcSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of parameters (m) and unknowns (n) of a parsed system.
#[no_mangle]
pub unsafe extern "C" fn rc_system_shape(
    sys: *const RcSystem,
    m: *mut usize,
    n: *mut usize,
) -> RcStatus {
    if sys.is_null() || m.is_null() || n.is_null() {
        set_error("null argument");
        return RcStatus::RcBadArgument;
    }
    *m = (*sys).inner.m;
    *n = (*sys).inner.n;
    RcStatus::RcOk
}

/// Triangular set report: canonical strings and main degrees.
#[no_mangle]
pub unsafe extern "C" fn rc_triangularize_json(
    sys: *const RcSystem,
    out: *mut *mut c_char,
) -> RcStatus {
    run_report(sys, out, report::triangularize_report)
}

/// Regular chain report: D_l and N_l.
#[no_mangle]
pub unsafe extern "C" fn rc_chain_json(sys: *const RcSystem, out: *mut *mut c_char) -> RcStatus {
    run_report(sys, out, report::chain_report)
}

/// Per-level delta profile.
#[no_mangle]
pub unsafe extern "C" fn rc_delta_json(sys: *const RcSystem, out: *mut *mut c_char) -> RcStatus {
    run_report(sys, out, report::delta_report)
}

/// Monic and primitive Chow forms with the predicted denominator.
#[no_mangle]
pub unsafe extern "C" fn rc_chow_json(sys: *const RcSystem, out: *mut *mut c_char) -> RcStatus {
    run_report(sys, out, report::chow_report)
}

/// Integrality and height-bound verification. Returns
/// RcVerificationFailure (with the report still written) when a check
/// fails.
#[no_mangle]
pub unsafe extern "C" fn rc_verify_json(sys: *const RcSystem, out: *mut *mut c_char) -> RcStatus {
    run_report(sys, out, report::verify_report)
}

/// Modular delta profile at a fixed prime (decimal string).
#[no_mangle]
pub unsafe extern "C" fn rc_modular_delta_json(
    sys: *const RcSystem,
    prime: *const c_char,
    out: *mut *mut c_char,
) -> RcStatus {
    let p = match read_str(prime) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let Ok(p) = num_bigint::BigInt::from_str(p) else {
        set_error("prime is not a decimal integer");
        return RcStatus::RcBadArgument;
    };
    run_report(sys, out, move |s| {
        report::modular_delta_report(s, &PrimeChoice::Fixed(p.clone()))
    })
}

/// Modular delta profiles at primes sampled from the recommended range.
#[no_mangle]
pub unsafe extern "C" fn rc_modular_delta_auto_json(
    sys: *const RcSystem,
    seed: u64,
    trials: usize,
    out: *mut *mut c_char,
) -> RcStatus {
    run_report(sys, out, move |s| {
        report::modular_delta_report(s, &PrimeChoice::Auto { seed, trials })
    })
}

fn parse_rat(s: &str) -> Option<BigRat> {
    match s.split_once('/') {
        Some((a, b)) => {
            let a = num_bigint::BigInt::from_str(a.trim()).ok()?;
            let b = num_bigint::BigInt::from_str(b.trim()).ok()?;
            if b == num_bigint::BigInt::from(0) {
                return None;
            }
            Some(BigRat::new(a, b))
        }
        None => Some(BigRat::from_integer(
            num_bigint::BigInt::from_str(s.trim()).ok()?,
        )),
    }
}

/// Every closed-form bound for input data (m, n, d, h); `d` is a decimal
/// integer, `h` a decimal integer or `a/b` rational. `level` restricts the
/// per-level bounds when nonnegative.
#[no_mangle]
pub unsafe extern "C" fn rc_bounds_json(
    m: u64,
    n: u64,
    d: *const c_char,
    h: *const c_char,
    level: i64,
    out: *mut *mut c_char,
) -> RcStatus {
    let (d, h) = match (read_str(d), read_str(h)) {
        (Ok(d), Ok(h)) => (d, h),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let Ok(d) = num_bigint::BigInt::from_str(d) else {
        set_error("d is not a decimal integer");
        return RcStatus::RcBadArgument;
    };
    let Some(h) = parse_rat(h) else {
        set_error("h is not a rational");
        return RcStatus::RcBadArgument;
    };
    let lvl = if level < 0 { None } else { Some(level as u64) };
    emit(out, &report::bounds_report(m, n, &d, &h, lvl))
}

/// The prime-size recipe: H_A and the range [6 H_A, 12 H_A].
#[no_mangle]
pub unsafe extern "C" fn rc_prime_range_json(
    m: u64,
    n: u64,
    d: *const c_char,
    h: *const c_char,
    out: *mut *mut c_char,
) -> RcStatus {
    let (d, h) = match (read_str(d), read_str(h)) {
        (Ok(d), Ok(h)) => (d, h),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let Ok(d) = num_bigint::BigInt::from_str(d) else {
        set_error("d is not a decimal integer");
        return RcStatus::RcBadArgument;
    };
    let Some(h) = parse_rat(h) else {
        set_error("h is not a rational");
        return RcStatus::RcBadArgument;
    };
    emit(out, &report::prime_range_report(m, n, &d, &h))
}

//! C ABI for causalkit.
//!
//! Objects are opaque handles created by `*_from_text` or `*_preset` and
//! released with the matching `*_free`. Every fallible function returns a
//! [`CkStatus`]; on failure `ck_last_error()` describes the problem until the
//! next call on the same thread. Strings returned through `char **` are owned
//! by the caller and released with `ck_string_free`. Panics never cross the
//! boundary; they are reported as `CK_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use causalkit::circuit::{fixed_point_search, CountingOracle};
use causalkit::classical::format::parse_process;
use causalkit::classical::presets::process_preset;
use causalkit::classical::{classify, is_logically_consistent, ClassicalProcess, Classification};
use causalkit::exact::format_rational;
use causalkit::games::{builtin_game, causal_bound, format::parse_game, play, strategy_preset, GameSpec};
use causalkit::quantum::{self, format::parse_process_matrix, Operator, ProcessMatrix};
use causalkit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkStatus {
    CkOk = 0,
    CkNullPointer = 1,
    CkInvalidUtf8 = 2,
    CkParse = 3,
    CkInvalid = 4,
    CkDimension = 5,
    CkTooLarge = 6,
    CkInconsistent = 7,
    CkPromiseViolation = 8,
    CkUnknown = 9,
    CkPanic = 10,
}

pub struct CkProcess(ClassicalProcess);
pub struct CkGame(GameSpec);
pub struct CkMatrix(ProcessMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("no interior nul"));
}

fn status_of(error: &Error) -> CkStatus {
    match error {
        Error::Parse { .. } => CkStatus::CkParse,
        Error::Dimension(_) => CkStatus::CkDimension,
        Error::EnumerationTooLarge { .. } => CkStatus::CkTooLarge,
        Error::Inconsistent => CkStatus::CkInconsistent,
        Error::PromiseViolation { .. } => CkStatus::CkPromiseViolation,
        Error::Unknown { .. } => CkStatus::CkUnknown,
        _ => CkStatus::CkInvalid,
    }
}

struct Failure(CkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn guard(body: impl FnOnce() -> Outcome) -> CkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            CkStatus::CkOk
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CkStatus::CkPanic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CkStatus::CkNullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(CkStatus::CkInvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread; empty after success.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ck_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a classical process in the text format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_process_from_text(text: *const c_char, out: *mut *mut CkProcess) -> CkStatus {
    guard(|| {
        let p = parse_process(c_str(text, "text")?)?;
        write(out, Box::into_raw(Box::new(CkProcess(p))), "out")
    })
}

/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_process_preset(name: *const c_char, out: *mut *mut CkProcess) -> CkStatus {
    guard(|| {
        let p = process_preset(c_str(name, "name")?)?;
        write(out, Box::into_raw(Box::new(CkProcess(p))), "out")
    })
}

/// # Safety
/// `p` must come from this library or be null, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ck_process_free(p: *mut CkProcess) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_process_is_consistent(p: *const CkProcess, cap: u64, out: *mut bool) -> CkStatus {
    guard(|| {
        let p = handle(p, "process")?;
        write(out, is_logically_consistent(&p.0, cap)?, "out")
    })
}

/// Writes true for a causal process, false for a non-causal one.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_process_classify(p: *const CkProcess, cap: u64, out_causal: *mut bool) -> CkStatus {
    guard(|| {
        let p = handle(p, "process")?;
        let causal = matches!(classify(&p.0, cap)?, Classification::Causal { .. });
        write(out_causal, causal, "out_causal")
    })
}

/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_game_preset(name: *const c_char, out: *mut *mut CkGame) -> CkStatus {
    guard(|| {
        let g = builtin_game(c_str(name, "name")?)?;
        write(out, Box::into_raw(Box::new(CkGame(g))), "out")
    })
}

/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_game_from_text(text: *const c_char, out: *mut *mut CkGame) -> CkStatus {
    guard(|| {
        let g = parse_game(c_str(text, "text")?)?;
        write(out, Box::into_raw(Box::new(CkGame(g))), "out")
    })
}

/// # Safety
/// `g` must come from this library or be null, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ck_game_free(g: *mut CkGame) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Causal bound as an exact `p/q` string.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_game_bound(g: *const CkGame, cap: u64, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let g = handle(g, "game")?;
        let bound = causal_bound(&g.0, cap)?;
        write(out, owned_string(format_rational(&bound.result.success)), "out")
    })
}

/// Success probability of a named strategy preset on a process, as `p/q`.
///
/// # Safety
/// Handles must be live; `strategy` nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_game_play(
    g: *const CkGame,
    p: *const CkProcess,
    strategy: *const c_char,
    out: *mut *mut c_char,
) -> CkStatus {
    guard(|| {
        let (g, p) = (handle(g, "game")?, handle(p, "process")?);
        let s = strategy_preset(c_str(strategy, "strategy")?, &g.0, &p.0)?;
        let result = play(&g.0, &p.0, &s)?;
        write(out, owned_string(format_rational(&result.success)), "out")
    })
}

/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_matrix_preset(name: *const c_char, out: *mut *mut CkMatrix) -> CkStatus {
    guard(|| {
        let w = quantum::quantum_preset(c_str(name, "name")?)?;
        write(out, Box::into_raw(Box::new(CkMatrix(w))), "out")
    })
}

/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_matrix_from_text(text: *const c_char, out: *mut *mut CkMatrix) -> CkStatus {
    guard(|| {
        let w = parse_process_matrix(c_str(text, "text")?)?;
        write(out, Box::into_raw(Box::new(CkMatrix(w))), "out")
    })
}

/// # Safety
/// `w` must come from this library or be null, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ck_matrix_free(w: *mut CkMatrix) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_matrix_validate(w: *const CkMatrix, epsilon: f64, out: *mut bool) -> CkStatus {
    guard(|| {
        let w = handle(w, "matrix")?;
        write(out, quantum::validate(&w.0, epsilon).valid, "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_ocb_value(epsilon: f64, out: *mut f64) -> CkStatus {
    guard(|| write(out, quantum::ocb_value(epsilon)?, "out"))
}

unsafe fn qubit_operator(ptr: *const f64, what: &str) -> Result<Operator, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let v = std::slice::from_raw_parts(ptr, 8);
    Ok(Operator::from_fn(2, 2, |r, c| quantum::c(v[2 * (2 * r + c)], v[2 * (2 * r + c) + 1])))
}

/// Commute (0) or anticommute (1) test with one use of each unitary. Each
/// unitary is 8 doubles: row-major entries as (re, im) pairs.
///
/// # Safety
/// `b` and `c` must point to 8 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_commute_test(b: *const f64, c: *const f64, epsilon: f64, out: *mut u32) -> CkStatus {
    guard(|| {
        let (b, c) = (qubit_operator(b, "b")?, qubit_operator(c, "c")?);
        write(out, quantum::commute_test(&b, &c, epsilon)? as u32, "out")
    })
}

/// Fixed point of the box `i -> table[i]` with one query.
///
/// # Safety
/// `table` must point to `n` values; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_fixed_point_search(
    table: *const usize,
    n: usize,
    cap: u64,
    out_value: *mut usize,
    out_queries: *mut u64,
) -> CkStatus {
    guard(|| {
        if table.is_null() {
            return Err(null("table"));
        }
        let oracle = CountingOracle::from_table(std::slice::from_raw_parts(table, n).to_vec())?;
        let found = fixed_point_search(Arc::new(oracle), cap)?;
        write(out_value, found.value, "out_value")?;
        write(out_queries, found.queries, "out_queries")
    })
}

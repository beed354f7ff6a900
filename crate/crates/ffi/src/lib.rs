//! C interface to `entropy-adjoint`.
//!
//! Every object is an opaque handle created by an `ea_*_new`/`ea_*_from_json`
//! call and released with its `ea_*_free`. Functions return an [`EaStatus`];
//! on anything but `EA_STATUS_OK` a message is available from
//! [`ea_last_error`]. Strings handed out by the library must be released with
//! [`ea_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use entropy_adjoint::galois::{self, Connection, MonotoneMap, Side};
use entropy_adjoint::szilard::{self, EngineState, SzilardLedger};
use entropy_adjoint::transfer::{classify_step, ProcessStep, StepClass};
use entropy_adjoint::{model, Error, Space};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EaStatus {
    Ok = 0,
    /// The checked property does not hold (or the requested object does not exist).
    PropertyFails = 1,
    InvalidInput = 2,
    NullPointer = 3,
    Internal = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EaSide {
    /// Right adjoint `G` of the given `F`.
    Right = 0,
    /// Left adjoint `F` of the given `G`.
    Left = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EaStepClass {
    Reversible = 0,
    Irreversible = 1,
    Decreasing = 2,
}

/// An entropy system or finite order.
pub struct EaSystem(Arc<Space>);

pub struct EaMap(MonotoneMap);

pub struct EaConnection(Connection);

pub struct EaEngine {
    state: EngineState,
    ledger: SzilardLedger,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: EaStatus, message: impl Into<String>) -> EaStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> EaStatus {
    match e {
        Error::Unverified => fail(EaStatus::PropertyFails, e.to_string()),
        other => fail(EaStatus::InvalidInput, other.to_string()),
    }
}

fn guard(body: impl FnOnce() -> EaStatus) -> EaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(EaStatus::Internal, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, EaStatus> {
    if p.is_null() {
        return Err(fail(EaStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(EaStatus::InvalidInput, "string is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, EaStatus> {
    p.as_ref().ok_or_else(|| fail(EaStatus::NullPointer, "null handle"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> EaStatus {
    *out = Box::into_raw(Box::new(value));
    EaStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> EaStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            EaStatus::Ok
        }
        Err(_) => fail(EaStatus::Internal, "string contains NUL"),
    }
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! out_ptr {
    ($out:expr) => {
        if $out.is_null() {
            return fail(EaStatus::NullPointer, "null output pointer");
        }
    };
}

/// Message for the last failing call on this thread, or NULL. Free with
/// [`ea_string_free`].
#[no_mangle]
pub extern "C" fn ea_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ea_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a system or order description (JSON text).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ea_system_from_json(json: *const c_char, out: *mut *mut EaSystem) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let json = try_ffi!(text(json));
        let value = try_ffi!(model::parse_json(json).map_err(from_error));
        let space = try_ffi!(model::space_from_value(&value).map_err(from_error));
        put(out, EaSystem(Arc::new(space)))
    })
}

/// # Safety
/// `system` must come from [`ea_system_from_json`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ea_system_free(system: *mut EaSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Parses a map from `source` to `target`.
///
/// # Safety
/// Pointers must be valid; `json` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ea_map_from_json(
    json: *const c_char,
    source: *const EaSystem,
    target: *const EaSystem,
    out: *mut *mut EaMap,
) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let json = try_ffi!(text(json));
        let (s, t) = (try_ffi!(handle(source)), try_ffi!(handle(target)));
        let value = try_ffi!(model::parse_json(json).map_err(from_error));
        let map = try_ffi!(model::map_from_value(&value, s.0.clone(), t.0.clone()).map_err(from_error));
        put(out, EaMap(map))
    })
}

/// JSON form of a map. Free the result with [`ea_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_map_to_json(map: *const EaMap, out: *mut *mut c_char) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let map = try_ffi!(handle(map));
        put_string(out, model::map_to_value(&map.0).to_string())
    })
}

/// # Safety
/// `map` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ea_map_free(map: *mut EaMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Checks `left ⊣ right`. Returns `EA_STATUS_OK` when a report was
/// produced, whatever its verdict; see [`ea_connection_is_verified`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_connection_check(
    left: *const EaMap,
    right: *const EaMap,
    out: *mut *mut EaConnection,
) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let (f, g) = (try_ffi!(handle(left)), try_ffi!(handle(right)));
        let conn = try_ffi!(galois::check_connection(&f.0, &g.0).map_err(from_error));
        put(out, EaConnection(conn))
    })
}

/// `EA_STATUS_OK` if both criteria hold, `EA_STATUS_PROPERTY_FAILS` otherwise.
///
/// # Safety
/// `conn` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_connection_is_verified(conn: *const EaConnection) -> EaStatus {
    guard(|| {
        let conn = try_ffi!(handle(conn));
        if conn.0.is_verified() {
            EaStatus::Ok
        } else {
            fail(
                EaStatus::PropertyFails,
                conn.0.conditions.first_witness().unwrap_or_else(|| conn.0.definition.to_string()),
            )
        }
    })
}

/// Human-readable report with witnesses. Free with [`ea_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_connection_report(conn: *const EaConnection, out: *mut *mut c_char) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let conn = try_ffi!(handle(conn));
        put_string(out, conn.0.to_string())
    })
}

/// # Safety
/// `conn` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ea_connection_free(conn: *mut EaConnection) {
    if !conn.is_null() {
        drop(Box::from_raw(conn));
    }
}

/// Constructs the adjoint on `side`; `EA_STATUS_PROPERTY_FAILS` when none exists.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_synthesize_adjoint(map: *const EaMap, side: EaSide, out: *mut *mut EaMap) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let map = try_ffi!(handle(map));
        let side = match side {
            EaSide::Right => Side::RightOf,
            EaSide::Left => Side::LeftOf,
        };
        match galois::synthesize_adjoint(&map.0, side) {
            Ok(Some(adj)) => put(out, EaMap(adj)),
            Ok(None) => fail(EaStatus::PropertyFails, "no adjoint exists"),
            Err(e) => from_error(e),
        }
    })
}

/// Classifies the step `pre → post` in `system` (labels or rationals as text).
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ea_classify_step(
    system: *const EaSystem,
    pre: *const c_char,
    post: *const c_char,
    out: *mut EaStepClass,
) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let sys = try_ffi!(handle(system));
        let (a, b) = (try_ffi!(text(pre)), try_ffi!(text(post)));
        let step = try_ffi!(ProcessStep::parse(sys.0.clone(), a, b).map_err(from_error));
        *out = match try_ffi!(classify_step(&step).map_err(from_error)) {
            StepClass::Reversible => EaStepClass::Reversible,
            StepClass::IrreversibleIncreasing => EaStepClass::Irreversible,
            StepClass::EntropyDecreasing => EaStepClass::Decreasing,
        };
        EaStatus::Ok
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_engine_new(
    temperature: f64,
    memory_bits: u32,
    eta: f64,
    out: *mut *mut EaEngine,
) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let state = try_ffi!(szilard::init_engine(temperature, memory_bits as usize, eta).map_err(from_error));
        put(out, EaEngine { state, ledger: SzilardLedger::new(temperature) })
    })
}

/// # Safety
/// `engine` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_engine_run_cycles(engine: *mut EaEngine, cycles: u64) -> EaStatus {
    guard(|| {
        let Some(engine) = engine.as_mut() else {
            return fail(EaStatus::NullPointer, "null handle");
        };
        for _ in 0..cycles {
            let record = szilard::run_cycle(&mut engine.state);
            engine.ledger.push(record);
        }
        EaStatus::Ok
    })
}

/// Erases `n_bits` of memory and writes the expelled heat in joules.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_engine_erase_memory(engine: *mut EaEngine, n_bits: i64, heat_j: *mut f64) -> EaStatus {
    guard(|| {
        out_ptr!(heat_j);
        let Some(engine) = engine.as_mut() else {
            return fail(EaStatus::NullPointer, "null handle");
        };
        *heat_j = try_ffi!(szilard::erase_memory(&mut engine.state, n_bits).map_err(from_error));
        EaStatus::Ok
    })
}

/// Ledger of all cycles run so far as CSV. Free with [`ea_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_engine_ledger_csv(engine: *const EaEngine, out: *mut *mut c_char) -> EaStatus {
    guard(|| {
        out_ptr!(out);
        let engine = try_ffi!(handle(engine));
        put_string(out, engine.ledger.to_csv())
    })
}

/// `EA_STATUS_OK` if the second-law audit passes.
///
/// # Safety
/// `engine` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_engine_audit(engine: *const EaEngine) -> EaStatus {
    guard(|| {
        let engine = try_ffi!(handle(engine));
        let report = szilard::audit_ledger(&engine.ledger);
        if report.passes {
            EaStatus::Ok
        } else {
            fail(EaStatus::PropertyFails, report.violations.join("; "))
        }
    })
}

/// # Safety
/// `engine` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ea_engine_free(engine: *mut EaEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

//! C ABI over psakit.
//!
//! A scenario is parsed once into an opaque `PsakitScenario` handle; the
//! commands return JSON reports as heap strings owned by the caller and
//! released with `psakit_string_free`. Every function returns a
//! `PsakitStatus`; on failure the message is available from
//! `psakit_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use psakit::cli::{cmd_classify, cmd_graph, cmd_ks, cmd_sample};
use psakit::relations::{classify, Classification};
use psakit::scenario::{parse_scenario_str, ScenarioSpec};
use psakit::{Error, Tolerances};

/// Opaque scenario handle.
pub struct PsakitScenario {
    spec: ScenarioSpec,
    tol: Tolerances,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsakitStatus {
    Ok = 0,
    Dimension = 1,
    Numerical = 2,
    InvalidPower = 3,
    InvalidBasis = 4,
    CombinatorialBlowup = 5,
    NotTomographicallyComplete = 6,
    InconsistentPsa = 7,
    SearchBudget = 8,
    NonExhaustiveContext = 9,
    InvalidState = 10,
    Schema = 11,
    Validation = 12,
    Io = 13,
    NullPointer = 100,
    InvalidUtf8 = 101,
    Panic = 102,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsakitClassification {
    Entangled = 0,
    IntensiveOnly = 1,
    Separable = 2,
    EffectiveOnlyAnomaly = 3,
}

impl From<Classification> for PsakitClassification {
    fn from(c: Classification) -> Self {
        match c {
            Classification::Entangled => PsakitClassification::Entangled,
            Classification::IntensiveOnly => PsakitClassification::IntensiveOnly,
            Classification::Separable => PsakitClassification::Separable,
            Classification::EffectiveOnlyAnomaly => PsakitClassification::EffectiveOnlyAnomaly,
        }
    }
}

fn status_of(e: &Error) -> PsakitStatus {
    match e {
        Error::Dimension(_) => PsakitStatus::Dimension,
        Error::Numerical(_) => PsakitStatus::Numerical,
        Error::InvalidPower { .. } => PsakitStatus::InvalidPower,
        Error::InvalidBasis { .. } => PsakitStatus::InvalidBasis,
        Error::CombinatorialBlowup { .. } => PsakitStatus::CombinatorialBlowup,
        Error::NotTomographicallyComplete { .. } => PsakitStatus::NotTomographicallyComplete,
        Error::InconsistentPsa(_) => PsakitStatus::InconsistentPsa,
        Error::SearchBudget { .. } => PsakitStatus::SearchBudget,
        Error::NonExhaustiveContext(_) => PsakitStatus::NonExhaustiveContext,
        Error::InvalidState(_) => PsakitStatus::InvalidState,
        Error::Schema { .. } => PsakitStatus::Schema,
        Error::Validation(_) => PsakitStatus::Validation,
        Error::Io(_) => PsakitStatus::Io,
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Failure {
    Lib(Error),
    Status(PsakitStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PsakitStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PsakitStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(format!("error[{}]: {e}", e.code()));
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            PsakitStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(PsakitStatus::NullPointer, format!("{what} is null"))
}

unsafe fn scenario_ref<'a>(s: *const PsakitScenario) -> Result<&'a PsakitScenario, Failure> {
    s.as_ref().ok_or_else(|| null("scenario"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Failure::Status(PsakitStatus::Panic, "report contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses scenario JSON into a new handle stored in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psakit_scenario_from_json(json: *const c_char, out: *mut *mut PsakitScenario) -> PsakitStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| Failure::Status(PsakitStatus::InvalidUtf8, "scenario is not valid UTF-8".into()))?;
        let spec = parse_scenario_str(text)?;
        let tol = spec.tolerances();
        *out = Box::into_raw(Box::new(PsakitScenario { spec, tol }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `s` must come from `psakit_scenario_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn psakit_scenario_free(s: *mut PsakitScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Classification only, without building a report.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psakit_classification(s: *const PsakitScenario, out: *mut PsakitClassification) -> PsakitStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let joint = s.spec.build_joint(&s.tol)?;
        *out = classify(&joint, &s.tol)?.classification.into();
        Ok(())
    })
}

/// Classify report as JSON.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psakit_classify(s: *const PsakitScenario, out: *mut *mut c_char) -> PsakitStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        write_string(out, cmd_classify(&s.spec, &s.tol, None)?.to_json())
    })
}

/// Sample report as JSON. `shots == 0` falls back to the scenario's
/// sampling block, as does `has_seed == false` for the seed.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psakit_sample(
    s: *const PsakitScenario,
    shots: u64,
    seed: u64,
    has_seed: bool,
    out: *mut *mut c_char,
) -> PsakitStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        let shots = (shots > 0).then_some(shots);
        let seed = has_seed.then_some(seed);
        write_string(out, cmd_sample(&s.spec, &s.tol, shots, seed, None, None)?.to_json())
    })
}

/// Graph report as JSON.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psakit_graph(s: *const PsakitScenario, out: *mut *mut c_char) -> PsakitStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        write_string(out, cmd_graph(&s.spec, &s.tol)?.to_json())
    })
}

/// Binary-valuation search report as JSON. `budget == 0` keeps the
/// configured budget.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psakit_ks(s: *const PsakitScenario, budget: u64, out: *mut *mut c_char) -> PsakitStatus {
    guard(|| {
        let s = scenario_ref(s)?;
        write_string(out, cmd_ks(&s.spec, &s.tol, (budget > 0).then_some(budget))?.to_json())
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn psakit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn psakit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn psakit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

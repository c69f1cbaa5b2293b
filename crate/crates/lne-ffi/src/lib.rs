//! C ABI over the normal-embedding decision pipeline.
//!
//! Every fallible entry point returns an [`LneStatus`] and writes results
//! through out pointers. Strings handed back through `char **` are heap
//! allocated and must be released with [`lne_string_free`]; curve handles
//! with [`lne_curve_free`]. After any non-zero status the thread-local
//! message from [`lne_last_error_message`] describes what went wrong.
//!
//! JSON payloads are the same envelopes the `lne` binary prints and conform
//! to the schema returned by [`lne_output_schema`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use lne_core::curve::{plane_curve_ne, Status};
use lne_core::error::Error;
use lne_core::parse::parse_polynomial;
use lne_core::poly::Polynomial;
use lne_core::report::{self, Envelope, ReasonJson};
use lne_core::scalar::ExactScalar;
use lne_core::slicer::{brieskorn_test, revalidate, sectional_test, SearchConfig};
use lne_core::tol;
use lne_core::witness::{witness_with_pair, WitnessConfig};

/// Result of every fallible call. `Ok` is zero; the other values name the
/// failure class and leave a message for [`lne_last_error_message`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LneStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Structural = 5,
    Precondition = 6,
    Precision = 7,
    Unsupported = 8,
    Io = 9,
    Json = 10,
    Internal = 11,
    Panic = 12,
}

/// Outcome of a decision. Inconclusive is a legitimate answer of the
/// one-sided criterion, not an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LneVerdict {
    Ne = 0,
    NonNe = 1,
    Inconclusive = 2,
}

/// Opaque parsed germ. Create with [`lne_curve_parse`], release with
/// [`lne_curve_free`]. Handles are immutable and safe to share across
/// threads for reading.
pub struct LneCurve {
    poly: Polynomial,
    text: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn fail(err: &Error) -> LneStatus {
    set_error(&err.to_string());
    match err {
        Error::Structural(_) => LneStatus::Structural,
        Error::Domain(_) => LneStatus::Domain,
        Error::Precondition(_) => LneStatus::Precondition,
        Error::Unsupported(_) => LneStatus::Unsupported,
        Error::Precision { .. } => LneStatus::Precision,
        Error::Parse { .. } => LneStatus::Parse,
        Error::Internal(_) => LneStatus::Internal,
        Error::Io(_) => LneStatus::Io,
        Error::Json(_) => LneStatus::Json,
    }
}

fn null_argument() -> LneStatus {
    set_error("null pointer argument");
    LneStatus::NullArgument
}

fn guarded<F: FnOnce() -> LneStatus>(body: F) -> LneStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic caught at the C boundary");
            LneStatus::Panic
        }
    }
}

unsafe fn utf8<'a>(ptr: *const c_char) -> Result<&'a str, LneStatus> {
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        LneStatus::InvalidUtf8
    })
}

fn heap_string(text: String) -> Result<*mut c_char, Error> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| Error::structural("rendered output contains an interior NUL byte"))
}

fn envelope_ptr(envelope: &Envelope) -> Result<*mut c_char, Error> {
    heap_string(serde_json::to_string_pretty(envelope)?)
}

fn verdict_of(status: Status) -> LneVerdict {
    match status {
        Status::NE => LneVerdict::Ne,
        Status::NonNE => LneVerdict::NonNe,
        Status::Inconclusive => LneVerdict::Inconclusive,
    }
}

/// Working precision in bits; pass 0 for the default. Out of range values
/// are rejected like everywhere else in the toolkit.
fn pick_precision(precision: u32) -> Result<u32, Error> {
    if precision == 0 {
        Ok(tol::default_precision())
    } else {
        tol::validate_precision(precision)
    }
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lne_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// JSON schema of every envelope produced by this library. The pointer is
/// static; do not free it.
#[no_mangle]
pub extern "C" fn lne_output_schema() -> *const c_char {
    static SCHEMA: OnceLock<CString> = OnceLock::new();
    SCHEMA
        .get_or_init(|| CString::new(report::OUTPUT_SCHEMA).expect("schema text has no NUL"))
        .as_ptr()
}

/// Message of the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn lne_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned through a `char **` out parameter.
#[no_mangle]
pub unsafe extern "C" fn lne_string_free(text: *mut c_char) {
    if !text.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(CString::from_raw(text))));
    }
}

/// Parse a germ from its textual form, e.g. `"y^2 - x^3"` or
/// `"x^2 + (1-2i)*y^3"`. On success `*out` owns the new handle.
#[no_mangle]
pub unsafe extern "C" fn lne_curve_parse(
    text: *const c_char,
    out: *mut *mut LneCurve,
) -> LneStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return null_argument();
        }
        let text = match utf8(text) {
            Ok(text) => text,
            Err(status) => return status,
        };
        match parse_polynomial(text, None) {
            Ok(poly) => {
                let rendered = poly.to_string();
                *out = Box::into_raw(Box::new(LneCurve {
                    poly,
                    text: rendered,
                }));
                LneStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Release a handle returned by [`lne_curve_parse`]. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn lne_curve_free(curve: *mut LneCurve) {
    if !curve.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(curve))));
    }
}

/// Canonical rendering of the germ; parsing it back yields the same
/// polynomial.
#[no_mangle]
pub unsafe extern "C" fn lne_curve_render(
    curve: *const LneCurve,
    out: *mut *mut c_char,
) -> LneStatus {
    guarded(|| {
        let Some(curve) = curve.as_ref() else {
            return null_argument();
        };
        if out.is_null() {
            return null_argument();
        }
        match heap_string(curve.text.clone()) {
            Ok(ptr) => {
                *out = ptr;
                LneStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Number of ambient variables of the germ.
#[no_mangle]
pub unsafe extern "C" fn lne_curve_num_vars(
    curve: *const LneCurve,
    out: *mut usize,
) -> LneStatus {
    guarded(|| {
        let Some(curve) = curve.as_ref() else {
            return null_argument();
        };
        if out.is_null() {
            return null_argument();
        }
        *out = curve.poly.num_vars();
        LneStatus::Ok
    })
}

/// Decide normal embedding of a plane curve germ. `json_out` may be null
/// when only the verdict is wanted.
#[no_mangle]
pub unsafe extern "C" fn lne_plane_curve(
    curve: *const LneCurve,
    verdict_out: *mut LneVerdict,
    json_out: *mut *mut c_char,
) -> LneStatus {
    guarded(|| {
        let Some(curve) = curve.as_ref() else {
            return null_argument();
        };
        if verdict_out.is_null() {
            return null_argument();
        }
        let verdict = match plane_curve_ne(&curve.poly) {
            Ok(verdict) => verdict,
            Err(err) => return fail(&err),
        };
        *verdict_out = verdict_of(verdict.status);
        if !json_out.is_null() {
            let mut envelope =
                Envelope::new("plane-curve", &curve.text, tol::default_precision());
            envelope.verdict = Some(report::verdict_json(&verdict, &curve.poly));
            match envelope_ptr(&envelope) {
                Ok(ptr) => *json_out = ptr,
                Err(err) => return fail(&err),
            }
        }
        LneStatus::Ok
    })
}

/// Run the sectional criterion on a germ in three or more variables.
/// `precision` is in bits, 0 for the default. With `use_cone_shortcut` a
/// non-reduced tangent cone settles the verdict without a slice search.
/// `json_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn lne_slice_test(
    curve: *const LneCurve,
    seed: u64,
    precision: u32,
    use_cone_shortcut: bool,
    verdict_out: *mut LneVerdict,
    json_out: *mut *mut c_char,
) -> LneStatus {
    guarded(|| {
        let Some(curve) = curve.as_ref() else {
            return null_argument();
        };
        if verdict_out.is_null() {
            return null_argument();
        }
        let precision = match pick_precision(precision) {
            Ok(precision) => precision,
            Err(err) => return fail(&err),
        };
        let config = SearchConfig {
            seed,
            precision,
            use_cone_shortcut,
            ..SearchConfig::default()
        };
        let verdict = match sectional_test(&curve.poly, &config) {
            Ok(verdict) => verdict,
            Err(err) => return fail(&err),
        };
        *verdict_out = verdict_of(verdict.status);
        if !json_out.is_null() {
            let mut envelope = Envelope::new("slice-test", &curve.text, precision);
            envelope.seed = Some(seed);
            envelope.verdict = Some(report::verdict_json(&verdict, &curve.poly));
            match envelope_ptr(&envelope) {
                Ok(ptr) => *json_out = ptr,
                Err(err) => return fail(&err),
            }
        }
        LneStatus::Ok
    })
}

/// Sample an arc pair on a non normally embedded plane curve and fit the
/// inner over outer blow-up rate. The envelope lands in `json_out`.
#[no_mangle]
pub unsafe extern "C" fn lne_witness(
    curve: *const LneCurve,
    precision: u32,
    json_out: *mut *mut c_char,
) -> LneStatus {
    guarded(|| {
        let Some(curve) = curve.as_ref() else {
            return null_argument();
        };
        if json_out.is_null() {
            return null_argument();
        }
        let precision = match pick_precision(precision) {
            Ok(precision) => precision,
            Err(err) => return fail(&err),
        };
        let config = WitnessConfig {
            precision,
            ..WitnessConfig::default()
        };
        let (pair, report) = match witness_with_pair(&curve.poly, &config) {
            Ok(result) => result,
            Err(err) => return fail(&err),
        };
        let mut envelope = Envelope::new("witness", &curve.text, precision);
        envelope.witness = Some(report::witness_json(&pair, &report));
        match envelope_ptr(&envelope) {
            Ok(ptr) => {
                *json_out = ptr;
                LneStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Decide a Pham-Brieskorn sum with unit coefficients from its exponent
/// list.
#[no_mangle]
pub unsafe extern "C" fn lne_brieskorn(
    exponents: *const u32,
    count: usize,
    verdict_out: *mut LneVerdict,
) -> LneStatus {
    guarded(|| {
        if exponents.is_null() || verdict_out.is_null() {
            return null_argument();
        }
        let exponents = std::slice::from_raw_parts(exponents, count);
        let coefficients = vec![ExactScalar::one(); count];
        match brieskorn_test(exponents, &coefficients) {
            Ok(verdict) => {
                *verdict_out = verdict_of(verdict.status);
                LneStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Re-check every witness value inside a slice-test envelope (the JSON text
/// a previous call or the CLI produced). Returns `Ok` only when all checks
/// pass; `checks_out` (nullable) receives them as a JSON array of strings.
#[no_mangle]
pub unsafe extern "C" fn lne_revalidate(
    envelope_json: *const c_char,
    checks_out: *mut *mut c_char,
) -> LneStatus {
    guarded(|| {
        if envelope_json.is_null() {
            return null_argument();
        }
        let text = match utf8(envelope_json) {
            Ok(text) => text,
            Err(status) => return status,
        };
        let envelope: Envelope = match serde_json::from_str(text) {
            Ok(envelope) => envelope,
            Err(err) => return fail(&Error::from(err)),
        };
        let Some(verdict) = envelope.verdict else {
            return fail(&Error::structural(
                "the envelope holds no verdict; only slice-test envelopes can be revalidated",
            ));
        };
        let ReasonJson::SliceWitness { certificate } = verdict.reason else {
            return fail(&Error::structural(
                "the verdict carries no slice certificate to revalidate",
            ));
        };
        let (germ, certificate) = match report::certificate_from_json(&certificate) {
            Ok(pair) => pair,
            Err(err) => return fail(&err),
        };
        let checks = match revalidate(&germ, &certificate) {
            Ok(checks) => checks,
            Err(err) => return fail(&err),
        };
        if !checks_out.is_null() {
            let rendered = match serde_json::to_string_pretty(&checks) {
                Ok(rendered) => rendered,
                Err(err) => return fail(&Error::from(err)),
            };
            match heap_string(rendered) {
                Ok(ptr) => *checks_out = ptr,
                Err(err) => return fail(&err),
            }
        }
        LneStatus::Ok
    })
}

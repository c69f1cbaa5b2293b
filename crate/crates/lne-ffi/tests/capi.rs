//! Exercises the C entry points exactly as a foreign caller would: through
//! raw pointers, NUL-terminated strings, and status codes.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use lne_ffi::{
    lne_brieskorn, lne_curve_free, lne_curve_num_vars, lne_curve_parse, lne_curve_render,
    lne_last_error_message, lne_output_schema, lne_plane_curve, lne_revalidate, lne_slice_test,
    lne_string_free, lne_version, lne_witness, LneCurve, LneStatus, LneVerdict,
};

fn parse(text: &str) -> *mut LneCurve {
    let text = CString::new(text).unwrap();
    let mut curve: *mut LneCurve = ptr::null_mut();
    let status = unsafe { lne_curve_parse(text.as_ptr(), &mut curve) };
    assert_eq!(status, LneStatus::Ok, "{}", last_error());
    assert!(!curve.is_null());
    curve
}

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let text = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_owned();
    unsafe { lne_string_free(ptr) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(lne_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn assert_valid_envelope(text: &str) {
    let schema: serde_json::Value =
        serde_json::from_str(unsafe { CStr::from_ptr(lne_output_schema()) }.to_str().unwrap())
            .unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let instance: serde_json::Value = serde_json::from_str(text).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(&instance)
        .map(|err| err.to_string())
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

#[test]
fn version_and_schema_are_usable() {
    let version = unsafe { CStr::from_ptr(lne_version()) }.to_str().unwrap();
    assert!(version.contains('.'));
    let schema = unsafe { CStr::from_ptr(lne_output_schema()) }.to_str().unwrap();
    let parsed: serde_json::Value = serde_json::from_str(schema).unwrap();
    assert_eq!(parsed["properties"]["schema_version"]["const"], 1);
}

#[test]
fn parse_render_round_trip() {
    let curve = parse("y^2 - x^3");
    let mut vars = 0usize;
    assert_eq!(
        unsafe { lne_curve_num_vars(curve, &mut vars) },
        LneStatus::Ok
    );
    assert_eq!(vars, 2);

    let mut rendered: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { lne_curve_render(curve, &mut rendered) },
        LneStatus::Ok
    );
    let first = take_string(rendered);

    let again = parse(&first);
    let mut rendered: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { lne_curve_render(again, &mut rendered) },
        LneStatus::Ok
    );
    assert_eq!(take_string(rendered), first);

    unsafe {
        lne_curve_free(curve);
        lne_curve_free(again);
    }
}

#[test]
fn parse_failures_leave_a_message() {
    let text = CString::new("x^2 + * y").unwrap();
    let mut curve: *mut LneCurve = ptr::null_mut();
    let status = unsafe { lne_curve_parse(text.as_ptr(), &mut curve) };
    assert_eq!(status, LneStatus::Parse);
    assert!(curve.is_null());
    assert!(last_error().contains("offset"), "{}", last_error());
}

#[test]
fn null_arguments_are_rejected() {
    let mut curve: *mut LneCurve = ptr::null_mut();
    assert_eq!(
        unsafe { lne_curve_parse(ptr::null(), &mut curve) },
        LneStatus::NullArgument
    );
    let mut verdict = LneVerdict::Inconclusive;
    assert_eq!(
        unsafe { lne_plane_curve(ptr::null(), &mut verdict, ptr::null_mut()) },
        LneStatus::NullArgument
    );
    unsafe { lne_curve_free(ptr::null_mut()) };
    unsafe { lne_string_free(ptr::null_mut()) };
}

#[test]
fn plane_curve_verdicts_and_envelopes() {
    let smooth_pair = parse("x^2 - y^2");
    let mut verdict = LneVerdict::Inconclusive;
    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { lne_plane_curve(smooth_pair, &mut verdict, &mut json) },
        LneStatus::Ok
    );
    assert_eq!(verdict, LneVerdict::Ne);
    let text = take_string(json);
    assert!(text.contains("\"status\": \"NE\""));
    assert_valid_envelope(&text);
    unsafe { lne_curve_free(smooth_pair) };

    let tangential = parse("y^2 + x^4");
    let mut verdict = LneVerdict::Inconclusive;
    assert_eq!(
        unsafe { lne_plane_curve(tangential, &mut verdict, ptr::null_mut()) },
        LneStatus::Ok
    );
    assert_eq!(verdict, LneVerdict::NonNe);
    unsafe { lne_curve_free(tangential) };
}

#[test]
fn brieskorn_exponent_rules() {
    let mut verdict = LneVerdict::Ne;
    assert_eq!(
        unsafe { lne_brieskorn([2u32, 3, 3].as_ptr(), 3, &mut verdict) },
        LneStatus::Ok
    );
    assert_eq!(verdict, LneVerdict::NonNe);

    assert_eq!(
        unsafe { lne_brieskorn([2u32, 2, 3].as_ptr(), 3, &mut verdict) },
        LneStatus::Ok
    );
    assert_eq!(verdict, LneVerdict::Inconclusive);

    assert_eq!(
        unsafe { lne_brieskorn([2u32].as_ptr(), 1, &mut verdict) },
        LneStatus::Domain
    );
}

#[test]
fn slice_test_and_revalidate_round_trip() {
    let curve = parse("x^3 + x^2*y + y^3*z + z^5");
    let mut verdict = LneVerdict::Inconclusive;
    let mut json: *mut c_char = ptr::null_mut();
    let status = unsafe { lne_slice_test(curve, 1, 0, false, &mut verdict, &mut json) };
    assert_eq!(status, LneStatus::Ok, "{}", last_error());
    assert_eq!(verdict, LneVerdict::NonNe);
    let envelope = take_string(json);
    assert_valid_envelope(&envelope);
    unsafe { lne_curve_free(curve) };

    let c_envelope = CString::new(envelope.clone()).unwrap();
    let mut checks: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { lne_revalidate(c_envelope.as_ptr(), &mut checks) },
        LneStatus::Ok,
        "{}",
        last_error()
    );
    let checks: Vec<String> = serde_json::from_str(&take_string(checks)).unwrap();
    assert_eq!(checks.len(), 6);

    let tampered = envelope.replace("z^5", "z^6");
    assert_ne!(tampered, envelope);
    let c_tampered = CString::new(tampered).unwrap();
    assert_ne!(
        unsafe { lne_revalidate(c_tampered.as_ptr(), ptr::null_mut()) },
        LneStatus::Ok
    );
}

#[test]
fn witness_envelopes_validate() {
    let cusp = parse("y^2 - x^3");
    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { lne_witness(cusp, 0, &mut json) },
        LneStatus::Ok,
        "{}",
        last_error()
    );
    let text = take_string(json);
    assert!(text.contains("ratio-diverges"));
    assert_valid_envelope(&text);
    unsafe { lne_curve_free(cusp) };
}

#[test]
fn precision_and_preconditions_map_to_statuses() {
    let curve = parse("x^2 + y^2 - z^3");
    let mut verdict = LneVerdict::Ne;
    assert_eq!(
        unsafe { lne_slice_test(curve, 1, 32, true, &mut verdict, ptr::null_mut()) },
        LneStatus::Domain
    );
    assert_eq!(
        unsafe { lne_slice_test(curve, 1, 0, true, &mut verdict, ptr::null_mut()) },
        LneStatus::Ok
    );
    assert_eq!(verdict, LneVerdict::Inconclusive);
    unsafe { lne_curve_free(curve) };

    let smooth = parse("x^2 - y^2");
    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { lne_witness(smooth, 0, &mut json) },
        LneStatus::Precondition
    );
    assert!(last_error().contains("normally embedded"));
    unsafe { lne_curve_free(smooth) };
}

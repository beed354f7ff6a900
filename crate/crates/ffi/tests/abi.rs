use std::ffi::{c_char, CStr, CString};
use std::ptr;

use entropy_adjoint_ffi::*;

const REALS: &str = r#"{"line": "reals", "entropy": "identity", "grid_n": 12}"#;
const NATURALS: &str = r#"{"line": "naturals", "entropy": "identity", "grid_n": 12}"#;
const CHAIN3: &str = r#"{"elements": ["0", "1", "2"], "pairs": [["0", "1"], ["1", "2"]]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ea_string_free(s) };
    out
}

fn last_error() -> String {
    take(ea_last_error())
}

fn system(json: &str) -> *mut EaSystem {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ea_system_from_json(c(json).as_ptr(), &mut out) }, EaStatus::Ok);
    out
}

fn map(json: &str, s: *const EaSystem, t: *const EaSystem) -> *mut EaMap {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ea_map_from_json(c(json).as_ptr(), s, t, &mut out) }, EaStatus::Ok);
    out
}

#[test]
fn ceiling_and_triple_connect() {
    unsafe {
        let (r, n) = (system(REALS), system(NATURALS));
        let f = map(r#"{"expr": ["ceil_div", 3]}"#, r, n);
        let g = map(r#"{"expr": ["affine", "3", "0"]}"#, n, r);
        let mut conn = ptr::null_mut();
        assert_eq!(ea_connection_check(f, g, &mut conn), EaStatus::Ok);
        assert_eq!(ea_connection_is_verified(conn), EaStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(ea_connection_report(conn, &mut report), EaStatus::Ok);
        assert!(take(report).contains("verdict: F ⊣ G"));

        let mut bad = ptr::null_mut();
        assert_eq!(ea_connection_check(f, f, &mut bad), EaStatus::InvalidInput);
        assert!(bad.is_null());
        assert!(!last_error().is_empty());

        ea_connection_free(conn);
        ea_map_free(f);
        ea_map_free(g);
        ea_system_free(r);
        ea_system_free(n);
    }
}

#[test]
fn failing_connection_reports_witness() {
    unsafe {
        let (r, n) = (system(REALS), system(NATURALS));
        let f = map(r#"{"expr": ["ceil_div", 3]}"#, r, n);
        let g = map(r#"{"expr": ["affine", "2", "0"]}"#, n, r);
        let mut conn = ptr::null_mut();
        assert_eq!(ea_connection_check(f, g, &mut conn), EaStatus::Ok);
        assert_eq!(ea_connection_is_verified(conn), EaStatus::PropertyFails);
        assert!(!last_error().is_empty());
        ea_connection_free(conn);
        ea_map_free(f);
        ea_map_free(g);
        ea_system_free(r);
        ea_system_free(n);
    }
}

#[test]
fn synthesized_adjoint_round_trips_through_json() {
    unsafe {
        let chain = system(CHAIN3);
        let two = system(r#"{"elements": ["0", "1"], "pairs": [["0", "1"]]}"#);
        let f = map(r#"{"map": {"0": "0", "1": "0", "2": "1"}}"#, chain, two);
        let mut g = ptr::null_mut();
        assert_eq!(ea_synthesize_adjoint(f, EaSide::Right, &mut g), EaStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(ea_map_to_json(g, &mut json), EaStatus::Ok);
        let json = take(json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["map"]["0"], "1");
        assert_eq!(value["map"]["1"], "2");

        let mut conn = ptr::null_mut();
        assert_eq!(ea_connection_check(f, g, &mut conn), EaStatus::Ok);
        assert_eq!(ea_connection_is_verified(conn), EaStatus::Ok);
        ea_connection_free(conn);

        // The constant map onto the top has a left adjoint (constant bottom) but
        // no right adjoint, since nothing maps below 0.
        let k = map(r#"{"map": {"0": "1", "1": "1", "2": "1"}}"#, chain, two);
        let mut left = ptr::null_mut();
        assert_eq!(ea_synthesize_adjoint(k, EaSide::Left, &mut left), EaStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(ea_map_to_json(left, &mut json), EaStatus::Ok);
        assert_eq!(take(json), r#"{"map":{"0":"0","1":"0"}}"#);
        ea_map_free(left);
        let mut none = ptr::null_mut();
        assert_eq!(ea_synthesize_adjoint(k, EaSide::Right, &mut none), EaStatus::PropertyFails);
        assert!(none.is_null());

        ea_map_free(k);
        ea_map_free(f);
        ea_map_free(g);
        ea_system_free(chain);
        ea_system_free(two);
    }
}

#[test]
fn missing_adjoint_is_property_failure() {
    unsafe {
        let v = system(r#"{"elements": ["a", "b", "t"], "pairs": [["a", "t"], ["b", "t"]]}"#);
        let two = system(r#"{"elements": ["0", "1"], "pairs": [["0", "1"]]}"#);
        // G(0) would have to be the largest of {a, b}.
        let f = map(r#"{"map": {"a": "0", "b": "0", "t": "1"}}"#, v, two);
        let mut g = ptr::null_mut();
        let status = ea_synthesize_adjoint(f, EaSide::Right, &mut g);
        assert_eq!(status, EaStatus::PropertyFails);
        assert!(g.is_null());
        assert!(last_error().contains("no adjoint"));
        ea_map_free(f);
        ea_system_free(v);
        ea_system_free(two);
    }
}

#[test]
fn step_classes() {
    unsafe {
        let r = system(REALS);
        let mut class = EaStepClass::Decreasing;
        assert_eq!(ea_classify_step(r, c("2").as_ptr(), c("2").as_ptr(), &mut class), EaStatus::Ok);
        assert_eq!(class, EaStepClass::Reversible);
        assert_eq!(ea_classify_step(r, c("1").as_ptr(), c("6/5").as_ptr(), &mut class), EaStatus::Ok);
        assert_eq!(class, EaStepClass::Irreversible);
        assert_eq!(ea_classify_step(r, c("3").as_ptr(), c("1/2").as_ptr(), &mut class), EaStatus::Ok);
        assert_eq!(class, EaStepClass::Decreasing);
        assert_eq!(ea_classify_step(r, c("x").as_ptr(), c("1").as_ptr(), &mut class), EaStatus::InvalidInput);
        ea_system_free(r);
    }
}

#[test]
fn engine_ledger_and_erasure() {
    unsafe {
        let mut engine = ptr::null_mut();
        assert_eq!(ea_engine_new(300.0, 2, 1.0, &mut engine), EaStatus::Ok);
        assert_eq!(ea_engine_run_cycles(engine, 3), EaStatus::Ok);
        assert_eq!(ea_engine_audit(engine), EaStatus::Ok);
        let mut csv = ptr::null_mut();
        assert_eq!(ea_engine_ledger_csv(engine, &mut csv), EaStatus::Ok);
        let csv = take(csv);
        assert_eq!(csv.lines().count(), 1 + 3 * 5);

        let w = 1.380649e-23 * 300.0 * std::f64::consts::LN_2;
        let mut heat = 0.0;
        assert_eq!(ea_engine_erase_memory(engine, 2, &mut heat), EaStatus::Ok);
        assert!((heat - 2.0 * w).abs() <= 1e-12 * w);
        assert_eq!(ea_engine_erase_memory(engine, -1, &mut heat), EaStatus::InvalidInput);
        assert_eq!(ea_engine_erase_memory(engine, 3, &mut heat), EaStatus::InvalidInput);
        ea_engine_free(engine);

        let mut rejected = ptr::null_mut();
        assert_eq!(ea_engine_new(300.0, 2, 0.5, &mut rejected), EaStatus::InvalidInput);
        assert!(rejected.is_null());
        assert_eq!(ea_engine_new(-1.0, 2, 1.0, &mut rejected), EaStatus::InvalidInput);
    }
}

#[test]
fn null_and_malformed_inputs() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(ea_system_from_json(ptr::null(), &mut out), EaStatus::NullPointer);
        assert_eq!(ea_system_from_json(c("{").as_ptr(), &mut out), EaStatus::InvalidInput);
        assert!(last_error().contains("line 1"));
        assert_eq!(ea_system_from_json(c(CHAIN3).as_ptr(), ptr::null_mut()), EaStatus::NullPointer);
        assert_eq!(ea_connection_is_verified(ptr::null()), EaStatus::NullPointer);
        assert_eq!(ea_engine_run_cycles(ptr::null_mut(), 1), EaStatus::NullPointer);
        ea_system_free(ptr::null_mut());
        ea_map_free(ptr::null_mut());
        ea_connection_free(ptr::null_mut());
        ea_engine_free(ptr::null_mut());
        ea_string_free(ptr::null_mut());
    }
}

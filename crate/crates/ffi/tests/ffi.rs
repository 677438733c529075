use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use spinorbit_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    spinorbit_string_free(p);
    s
}

unsafe fn parse(text: &str) -> *mut SpinorbitElement {
    let mut out = ptr::null_mut();
    assert_eq!(spinorbit_element_parse(cstr(text).as_ptr(), &mut out), SpinorbitStatus::Ok);
    out
}

#[test]
fn canonical_commutation_through_handles() {
    unsafe {
        let p = parse("dim 1; {(1)} r^0 x(0) p(1) s0");
        let x = parse("dim 1; {(1)} r^0 x(1) p(0) s0");
        let mut c = ptr::null_mut();
        assert_eq!(spinorbit_element_commutator(p, x, &mut c), SpinorbitStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(spinorbit_element_to_string(c, &mut s), SpinorbitStatus::Ok);
        assert_eq!(take_string(s), "dim 1\n{(-1i)*hbar} r^0 x(0) p(0) s0");
        let mut prod = ptr::null_mut();
        assert_eq!(spinorbit_element_mul(p, x, &mut prod), SpinorbitStatus::Ok);
        let mut adj = ptr::null_mut();
        assert_eq!(spinorbit_element_adjoint(prod, &mut adj), SpinorbitStatus::Ok);
        for h in [p, x, c, prod, adj] {
            spinorbit_element_free(h);
        }
    }
}

#[test]
fn catalog_and_substitution() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(spinorbit_catalog_build(cstr("H3").as_ptr(), &mut h), SpinorbitStatus::Ok);
        let mut j = ptr::null_mut();
        assert_eq!(spinorbit_catalog_build(cstr("J_1").as_ptr(), &mut j), SpinorbitStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(spinorbit_element_commutator(h, j, &mut c), SpinorbitStatus::Ok);
        let mut zero = -1;
        assert_eq!(spinorbit_element_is_zero(c, &mut zero), SpinorbitStatus::Ok);
        assert_eq!(zero, 1);
        let mut hs = ptr::null_mut();
        assert_eq!(spinorbit_element_substitute(h, cstr("gamma=0,hbar=1").as_ptr(), &mut hs), SpinorbitStatus::Ok);
        let mut s = ptr::null_mut();
        spinorbit_element_to_string(hs, &mut s);
        assert!(!take_string(s).contains("gamma"));
        for e in [h, j, c, hs] {
            spinorbit_element_free(e);
        }
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(spinorbit_element_parse(ptr::null(), &mut out), SpinorbitStatus::NullPointer);
        assert_eq!(spinorbit_element_parse(cstr("dim 7").as_ptr(), &mut out), SpinorbitStatus::Domain);
        assert_eq!(spinorbit_element_parse(cstr("garbage").as_ptr(), &mut out), SpinorbitStatus::Parse);
        let msg = CStr::from_ptr(spinorbit_last_error()).to_str().unwrap();
        assert!(msg.contains("dim"), "{msg}");
        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(spinorbit_element_parse(bad.as_ptr().cast(), &mut out), SpinorbitStatus::InvalidUtf8);
        assert!(out.is_null());

        let a = parse("dim 1; {(1)} r^0 x(1) p(0) s0");
        let b = parse("dim 2; {(1)} r^0 x(1,0) p(0,0) s0");
        assert_eq!(spinorbit_element_mul(a, b, &mut out), SpinorbitStatus::DimensionMismatch);
        spinorbit_element_free(a);
        spinorbit_element_free(b);

        assert_eq!(spinorbit_catalog_build(cstr("NOPE").as_ptr(), &mut out), SpinorbitStatus::UnknownKey);
        assert_eq!(spinorbit_catalog_build(cstr("A2M_RAW").as_ptr(), &mut out), SpinorbitStatus::MissingParameter);

        let (mut json, mut pass) = (ptr::null_mut(), -1);
        assert_eq!(spinorbit_verify_suite(cstr("NOPE").as_ptr(), &mut json, &mut pass), SpinorbitStatus::UnknownSuite);
        spinorbit_element_free(ptr::null_mut());
        spinorbit_string_free(ptr::null_mut());
    }
}

#[test]
fn suite_report_as_json() {
    unsafe {
        let (mut json, mut pass) = (ptr::null_mut(), -1);
        assert_eq!(spinorbit_verify_suite(cstr("SL2(3)").as_ptr(), &mut json, &mut pass), SpinorbitStatus::Ok);
        assert_eq!(pass, 1);
        let text = take_string(json);
        assert!(text.contains("\"suite\": \"SL2(3)\""));
        assert!(text.contains("\"millis\": null"));
    }
}

#[test]
fn energies() {
    unsafe {
        let mut e = 0.0;
        assert_eq!(
            spinorbit_closed_form_energy(0, 1, SpinorbitBranch::Plus, 1.0, 1.0, 0.0, &mut e),
            SpinorbitStatus::Ok
        );
        assert_eq!(e, -0.5);
        assert_eq!(
            spinorbit_closed_form_energy(0, 1, SpinorbitBranch::Minus, 1.0, 1.0, 3.0, &mut e),
            SpinorbitStatus::Domain
        );
        let mut fd = 0.0;
        assert_eq!(spinorbit_fd_level(SpinorbitBranch::Plus, 0, 1, 1.0, 1.0, 0.0, 2000, &mut fd), SpinorbitStatus::Ok);
        assert!((fd + 0.125).abs() < 1e-6, "{fd}");
        assert_eq!(spinorbit_fd_level(SpinorbitBranch::Minus, 0, 0, 1.0, 1.0, 0.0, 2000, &mut fd), SpinorbitStatus::Domain);
    }
}

#[test]
fn header_is_valid_c_and_cpp() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/spinorbit.h");
    let text = std::fs::read_to_string(header).unwrap();
    for sym in ["spinorbit_element_parse", "spinorbit_verify_suite", "SPINORBIT_STATUS_UNKNOWN_SUITE", "typedef struct SpinorbitElement SpinorbitElement"] {
        assert!(text.contains(sym), "header lacks {sym}");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, header])
            .output()
        else {
            eprintln!("{compiler} not available; syntax check skipped");
            continue;
        };
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

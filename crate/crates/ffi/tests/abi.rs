use std::ffi::{CStr, CString};
use std::ptr;

use monodromy_ffi::*;

fn parse(text: &str) -> *mut MdPoly {
    let c = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { md_poly_parse(c.as_ptr(), &mut p) }, MdStatus::Ok);
    assert!(!p.is_null());
    p
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { md_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(md_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn parse_print_and_discriminant() {
    let p = parse("y^2 - x");
    assert_eq!(take(unsafe { md_poly_to_string(p) }), "y^2 - x");
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { md_discriminant(p, &mut d) }, MdStatus::Ok);
    assert_eq!(take(d), "-4*x");
    let mut j = ptr::null_mut();
    assert_eq!(unsafe { md_critical_values_json(p, 0, &mut j) }, MdStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 1);
    unsafe { md_poly_free(p) };
}

#[test]
fn parse_error_sets_status_and_message() {
    let c = CString::new("y^2 +").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { md_poly_parse(c.as_ptr(), &mut p) }, MdStatus::Input);
    assert!(p.is_null());
    assert!(last_error().contains("syntax"), "{}", last_error());
}

#[test]
fn null_arguments_are_rejected() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { md_poly_parse(ptr::null(), &mut p) }, MdStatus::NullPointer);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { md_discriminant(ptr::null(), &mut d) }, MdStatus::NullPointer);
    assert!(unsafe { md_poly_to_string(ptr::null()) }.is_null());
    assert_eq!(unsafe { md_pi1_abelian_rank(ptr::null()) }, -1);
    unsafe {
        md_poly_free(ptr::null_mut());
        md_pi1_free(ptr::null_mut());
        md_monodromy_free(ptr::null_mut());
        md_string_free(ptr::null_mut());
    }
}

#[test]
fn transform_kepler_curve() {
    let p = parse("y + 2*x^2*y^2");
    let m = CString::new("swap-yz").unwrap();
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { md_transform(p, m.as_ptr(), true, &mut q) }, MdStatus::Ok);
    assert_eq!(take(unsafe { md_poly_to_string(q) }), "y^4 + 2*x^2*y");
    let singular = CString::new("1,0,0,0,0,0,0,0,1").unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { md_transform(p, singular.as_ptr(), false, &mut r) }, MdStatus::Input);
    assert!(r.is_null());
    unsafe {
        md_poly_free(p);
        md_poly_free(q);
    }
}

#[test]
fn pi1_of_quartic_is_free_abelian_of_rank_two() {
    let p = parse("y^4 + 2*x^2*y");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { md_pi1(p, 53, 0, 64, &mut r) }, MdStatus::Ok);
    assert_eq!(unsafe { md_pi1_abelian_rank(r) }, 2);
    assert_eq!(unsafe { md_pi1_generators(r) }, 2);
    let mut len = 99;
    assert_eq!(unsafe { md_pi1_torsion(r, ptr::null_mut(), 0, &mut len) }, MdStatus::Ok);
    assert_eq!(len, 0);
    assert!(take(unsafe { md_pi1_presentation(r) }).starts_with("< "));
    let v: serde_json::Value = serde_json::from_str(&take(unsafe { md_pi1_json(r) })).unwrap();
    assert_eq!(v["abelianization"]["rank"], 2);
    unsafe {
        md_pi1_free(r);
        md_poly_free(p);
    }
}

#[test]
fn pi1_rejects_low_precision() {
    let p = parse("y^2 - x");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { md_pi1(p, 32, 0, 64, &mut r) }, MdStatus::Input);
    unsafe { md_poly_free(p) };
}

#[test]
fn pendulum_monodromy_is_unipotent() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { md_monodromy(MdSystem::Pendulum, 53, false, &mut m) }, MdStatus::Ok);
    assert_eq!(unsafe { md_monodromy_loop_count(m) }, 1);
    let mut buf = [0i64; 9];
    let mut dim = 0;
    assert_eq!(unsafe { md_monodromy_matrix(m, 0, buf.as_mut_ptr(), 9, &mut dim) }, MdStatus::Ok);
    assert_eq!(dim, 3);
    assert_ne!(buf, [1, 0, 0, 0, 1, 0, 0, 0, 1]);
    assert_eq!(buf[6..], [0, 0, 1]);
    let mut small = [0i64; 4];
    assert_eq!(unsafe { md_monodromy_matrix(m, 0, small.as_mut_ptr(), 4, &mut dim) }, MdStatus::BufferTooSmall);
    assert_eq!(dim, 3);
    assert_eq!(unsafe { md_monodromy_matrix(m, 5, buf.as_mut_ptr(), 9, &mut dim) }, MdStatus::Input);
    assert!(take(unsafe { md_monodromy_group(m) }).starts_with('Z'));
    unsafe { md_monodromy_free(m) };
}

#[test]
fn constant_loop_is_trivial() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { md_monodromy(MdSystem::Kepler, 53, true, &mut m) }, MdStatus::Ok);
    let mut buf = [0i64; 4];
    let mut dim = 0;
    assert_eq!(unsafe { md_monodromy_matrix(m, 0, buf.as_mut_ptr(), 4, &mut dim) }, MdStatus::Ok);
    assert_eq!(buf, [1, 0, 0, 1]);
    assert_eq!(take(unsafe { md_monodromy_group(m) }), "trivial");
    let v: serde_json::Value = serde_json::from_str(&take(unsafe { md_monodromy_json(m) })).unwrap();
    assert_eq!(v["system"], "kepler");
    unsafe { md_monodromy_free(m) };
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/monodromy.h")).unwrap();
    for name in [
        "md_last_error",
        "md_string_free",
        "md_poly_parse",
        "md_poly_free",
        "md_poly_to_string",
        "md_discriminant",
        "md_critical_values_json",
        "md_transform",
        "md_pi1",
        "md_pi1_free",
        "md_pi1_abelian_rank",
        "md_pi1_generators",
        "md_pi1_torsion",
        "md_pi1_presentation",
        "md_pi1_json",
        "md_monodromy",
        "md_monodromy_free",
        "md_monodromy_loop_count",
        "md_monodromy_matrix",
        "md_monodromy_group",
        "md_monodromy_json",
    ] {
        assert!(h.contains(&format!("{}(", name)), "{} missing from header", name);
    }
    assert!(h.contains("typedef struct MdPoly MdPoly;"));
}

use std::ffi::{CStr, CString};
use std::ptr;

use tate_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = tate_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn lattice(json: &str) -> *mut TateLattice {
    let mut out = ptr::null_mut();
    let s = unsafe { tate_lattice_from_json(2, c(json).as_ptr(), 16, &mut out) };
    assert_eq!(s, TateStatus::Ok);
    out
}

#[test]
fn lattice_round_trip() {
    let a = lattice(r#"{"rows":1,"cols":1,"entries":[[{"v":0,"coeffs":["1"]}]]}"#);
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { tate_lattice_standard(2, 1, 2, &mut b) }, TateStatus::Ok);
    let (mut pos, mut neg, mut net) = (0u64, 0u64, 0i64);
    assert_eq!(unsafe { tate_lattice_index(a, b, &mut pos, &mut neg, &mut net) }, TateStatus::Ok);
    assert_eq!((pos, neg, net), (2, 0, 2));
    let mut leq = false;
    assert_eq!(unsafe { tate_lattice_leq(b, a, &mut leq) }, TateStatus::Ok);
    assert!(leq);
    let (mut j, mut m) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { tate_lattice_join(a, b, &mut j) }, TateStatus::Ok);
    assert_eq!(unsafe { tate_lattice_meet(a, b, &mut m) }, TateStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { tate_lattice_to_json(j, &mut text) }, TateStatus::Ok);
    let json = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
    unsafe { tate_string_free(text) };
    // the serialized join parses back to the same lattice as `a`
    let again = lattice(&json);
    let mut same = false;
    assert_eq!(unsafe { tate_lattice_leq(again, a, &mut same) }, TateStatus::Ok);
    assert!(same);
    for l in [a, b, j, m, again] {
        unsafe { tate_lattice_free(l) };
    }
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tate_lattice_from_json(2, c("{").as_ptr(), 16, &mut out) }, TateStatus::InvalidInput);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { tate_lattice_from_json(6, c("{}").as_ptr(), 16, &mut out) }, TateStatus::InvalidInput);
    assert_eq!(unsafe { tate_lattice_from_json(2, ptr::null(), 16, &mut out) }, TateStatus::NullPointer);
    let singular = r#"{"rows":1,"cols":1,"entries":[[{"v":0,"coeffs":[],"prec":3}]]}"#;
    assert_eq!(unsafe { tate_lattice_from_json(2, c(singular).as_ptr(), 16, &mut out) }, TateStatus::Precision);
    assert!(last_error().contains("precision"));
    let mut leq = false;
    assert_eq!(unsafe { tate_lattice_leq(ptr::null(), ptr::null(), &mut leq) }, TateStatus::NullPointer);
    // success clears the message
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { tate_lattice_standard(3, 2, 0, &mut l) }, TateStatus::Ok);
    assert!(tate_last_error_message().is_null());
    unsafe { tate_lattice_free(l) };
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        tate_lattice_standard(2, 1, 0, &mut a);
        tate_lattice_standard(2, 2, 0, &mut b);
    }
    let mut j = ptr::null_mut();
    assert_eq!(unsafe { tate_lattice_join(a, b, &mut j) }, TateStatus::InvalidInput);
    unsafe {
        tate_lattice_free(a);
        tate_lattice_free(b);
    }
}

#[test]
fn adeles_and_residues() {
    let (mut h0, mut h1) = (0usize, 0usize);
    assert_eq!(unsafe { tate_adele_cohomology(2, 3, 2, 8, &mut h0, &mut h1) }, TateStatus::Ok);
    assert_eq!((h0, h1), (4, 0));
    assert_eq!(unsafe { tate_adele_cohomology(3, -3, 1, 5, &mut h0, &mut h1) }, TateStatus::Ok);
    assert_eq!((h0, h1), (0, 2));
    assert_eq!(unsafe { tate_adele_cohomology(2, 5, 1, 2, &mut h0, &mut h1) }, TateStatus::InvalidInput);
    let mut out = ptr::null_mut();
    let s = unsafe { tate_residue_sum(2, c("1").as_ptr(), c("x^2+x").as_ptr(), c("x").as_ptr(), c("1").as_ptr(), &mut out) };
    assert_eq!(s, TateStatus::Ok);
    let json = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { tate_string_free(out) };
    assert_eq!(json, r#"{"sum":0,"per_place":{"x":1,"x+1":1,"inf":0}}"#);
    let s = unsafe { tate_residue_sum(2, c("1").as_ptr(), c("0").as_ptr(), c("x").as_ptr(), c("1").as_ptr(), &mut out) };
    assert_eq!(s, TateStatus::InvalidInput);
}

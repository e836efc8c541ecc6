use std::ffi::{CStr, CString};
use std::ptr;

use richpow_ffi::*;

const BETA: &str = "0->00001 1->01101";

fn parse(rules: &str) -> *mut RpMorphism {
    let c = CString::new(rules).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { rp_morphism_parse(c.as_ptr(), &mut m) }, RpStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    let p = rp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take_json(p: *mut std::ffi::c_char) -> serde_json::Value {
    let v = serde_json::from_str(CStr::from_ptr(p).to_str().unwrap()).unwrap();
    rp_string_free(p);
    v
}

#[test]
fn parse_error_sets_message() {
    let bad = CString::new("0->0x").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { rp_morphism_parse(bad.as_ptr(), &mut m) }, RpStatus::Parse);
    assert!(m.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_rejected() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { rp_morphism_parse(ptr::null(), &mut m) }, RpStatus::NullPointer);
    assert!(last_error().contains("null"));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { rp_morphism_to_string(ptr::null(), &mut s) }, RpStatus::NullPointer);
    unsafe {
        rp_morphism_free(ptr::null_mut());
        rp_string_free(ptr::null_mut());
        rp_eertree_free(ptr::null_mut());
        rp_fixed_point_free(ptr::null_mut());
    }
    assert_eq!(unsafe { rp_eertree_len(ptr::null()) }, 0);
}

#[test]
fn morphism_round_trip_and_apply() {
    let m = parse(BETA);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(rp_morphism_to_string(m, &mut s), RpStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_string();
        rp_string_free(s);
        let again = parse(&text);
        rp_morphism_free(again);

        let w = [0i64, 1];
        let mut need = 0usize;
        assert_eq!(rp_morphism_apply(m, w.as_ptr(), 2, ptr::null_mut(), 0, &mut need), RpStatus::BufferTooSmall);
        assert_eq!(need, 10);
        let mut buf = vec![0i64; need];
        assert_eq!(rp_morphism_apply(m, w.as_ptr(), 2, buf.as_mut_ptr(), buf.len(), &mut need), RpStatus::Ok);
        assert_eq!(buf, [0, 0, 0, 0, 1, 0, 1, 1, 0, 1]);

        let outside = [7i64];
        assert_eq!(
            rp_morphism_apply(m, outside.as_ptr(), 1, buf.as_mut_ptr(), buf.len(), &mut need),
            RpStatus::InvalidArgument
        );
        rp_morphism_free(m);
    }
}

#[test]
fn fixed_point_prefix_matches_image() {
    let m = parse(BETA);
    unsafe {
        let mut fp = ptr::null_mut();
        assert_eq!(rp_fixed_point_new(m, 0, &mut fp), RpStatus::Ok);
        let mut prefix = vec![0i64; 25];
        assert_eq!(rp_fixed_point_prefix(fp, 25, prefix.as_mut_ptr()), RpStatus::Ok);
        // the fixed point is the image of its own prefix
        let mut image = vec![0i64; 125];
        let mut n = 0;
        assert_eq!(rp_morphism_apply(m, prefix.as_ptr(), 25, image.as_mut_ptr(), 125, &mut n), RpStatus::Ok);
        assert_eq!(&image[..25], &prefix[..]);

        let mut bad = ptr::null_mut();
        assert_eq!(rp_fixed_point_new(m, 1, &mut bad), RpStatus::Precondition);
        assert!(bad.is_null());
        rp_fixed_point_free(fp);
        rp_morphism_free(m);
    }
}

#[test]
fn eertree_counts_and_undo() {
    unsafe {
        let t = rp_eertree_new();
        let mut created = false;
        // 0010110: 0, 00, 1, 010, 101, 11, 0110
        for c in [0, 0, 1, 0, 1, 1, 0] {
            assert_eq!(rp_eertree_add_letter(t, c, &mut created), RpStatus::Ok);
            assert!(created);
        }
        assert_eq!(rp_eertree_palindrome_count(t), 7);
        // longest palindromic suffix of 00101100 is 00
        assert_eq!(rp_eertree_add_letter(t, 0, &mut created), RpStatus::Ok);
        assert!(!created);
        assert_eq!(rp_eertree_undo(t), RpStatus::Ok);
        assert_eq!(rp_eertree_len(t), 7);
        assert_eq!(rp_eertree_palindrome_count(t), 7);
        rp_eertree_free(t);

        let empty = rp_eertree_new();
        assert_ne!(rp_eertree_undo(empty), RpStatus::Ok);
        rp_eertree_free(empty);
    }
}

#[test]
fn power_predicates() {
    let mut out = false;
    unsafe {
        let w = [0i64, 1, 1, 0];
        assert_eq!(rp_is_kpower(w.as_ptr(), 4, 2, RpPowerKind::Abelian, &mut out), RpStatus::Ok);
        assert!(out);
        assert_eq!(rp_is_kpower(w.as_ptr(), 4, 2, RpPowerKind::Ordinary, &mut out), RpStatus::Ok);
        assert!(!out);
        // 03 and 12 have equal sums but different letters
        let a = [0i64, 3, 1, 2];
        assert_eq!(rp_is_kpower(a.as_ptr(), 4, 2, RpPowerKind::Additive, &mut out), RpStatus::Ok);
        assert!(out);
        assert_eq!(rp_is_kpower(a.as_ptr(), 4, 1, RpPowerKind::Additive, &mut out), RpStatus::InvalidArgument);

        let r = [0i64, 1, 1, 0];
        assert_eq!(rp_is_rich(r.as_ptr(), 4, &mut out), RpStatus::Ok);
        assert!(out);
        // 00101100 has only 7 distinct nonempty palindromes
        let nr = [0i64, 0, 1, 0, 1, 1, 0, 0];
        assert_eq!(rp_is_rich(nr.as_ptr(), 8, &mut out), RpStatus::Ok);
        assert!(!out);
    }
}

#[test]
fn json_entry_points() {
    let m = parse(BETA);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(rp_scan_fixed_point_json(m, 0, 5, RpPowerKind::Additive, 2000, 0, &mut s), RpStatus::Ok);
        let v = take_json(s);
        assert_eq!(v["scanned_length"], 2000);
        assert_eq!(v["occurrences"].as_array().unwrap().len(), 0);

        assert_eq!(rp_stream_richness_json(m, 0, 5000, &mut s), RpStatus::Ok);
        let v = take_json(s);
        assert_eq!(v["rich"], true);
        assert_eq!(v["length"], 5000);

        let mut verdict = RpVerdict::Inconclusive;
        assert_eq!(rp_decide_json(m, 0, 5, &mut verdict, &mut s), RpStatus::Ok);
        assert_eq!(verdict, RpVerdict::Free);
        assert_eq!(take_json(s)["verdict"], "FREE");
        assert_eq!(rp_decide_json(m, 0, 4, &mut verdict, &mut s), RpStatus::Ok);
        assert_eq!(verdict, RpVerdict::PowerFound);
        take_json(s);
        rp_morphism_free(m);

        // longest binary square-free word is 010
        let a = CString::new("0,1").unwrap();
        assert_eq!(rp_search_json(a.as_ptr(), 2, RpPowerKind::Ordinary, false, &mut s), RpStatus::Ok);
        let v = take_json(s);
        assert_eq!(v["max_length"], 3);
        assert_eq!(v["exhausted"], true);
    }
}

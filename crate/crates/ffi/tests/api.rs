use std::ffi::{CStr, CString};
use std::ptr;

use sperner_ffi::*;

fn last_error() -> String {
    let p = sp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn fixture(name: &str) -> *mut SpSystem {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { sp_fixture_load(name.as_ptr(), &mut s) },
        SpStatus::Ok
    );
    s
}

#[test]
fn fixture_accessors_and_verify() {
    let s = fixture("fig1");
    unsafe {
        assert_eq!(
            (sp_system_n(s), sp_system_k(s), sp_system_len(s)),
            (7, 3, 5)
        );
        let mut info = SpVerifyInfo::default();
        assert_eq!(sp_verify(s, &mut info), SpStatus::Ok);
        assert!(info.valid);
        assert_eq!(info.violations, 0);

        let mut buf = [0usize; 8];
        let mut len = 0;
        assert_eq!(
            sp_system_class(s, 0, 0, buf.as_mut_ptr(), buf.len(), &mut len),
            SpStatus::Ok
        );
        assert_eq!(len, 2);
        assert_eq!(
            sp_system_class(s, 0, 2, buf.as_mut_ptr(), 1, &mut len),
            SpStatus::OutOfRange
        );
        assert_eq!(len, 3);
        assert_eq!(
            sp_system_class(s, 9, 0, buf.as_mut_ptr(), 8, &mut len),
            SpStatus::OutOfRange
        );
        sp_system_free(s);
    }
}

#[test]
fn unknown_fixture_sets_error() {
    let name = CString::new("fig-99").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { sp_fixture_load(name.as_ptr(), &mut s) },
        SpStatus::UnknownFixture
    );
    assert!(s.is_null());
    assert!(last_error().contains("fig-99"));
}

#[test]
fn parse_error_reports_position() {
    let text = CString::new("7 3 1\n0,1|2,3|4,5").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sp_parse(text.as_ptr(), &mut s) }, SpStatus::Parse);
    let msg = last_error();
    assert!(msg.contains("element 6 uncovered"), "{msg}");
    assert!(msg.contains("line 2"), "{msg}");
}

#[test]
fn invalid_system_verifies_false() {
    let text = CString::new("4 2 2\n0,1|2,3\n0,1,2|3").unwrap();
    let mut s = ptr::null_mut();
    let mut info = SpVerifyInfo::default();
    unsafe {
        assert_eq!(sp_parse(text.as_ptr(), &mut s), SpStatus::Ok);
        assert_eq!(sp_verify(s, &mut info), SpStatus::Ok);
        sp_system_free(s);
    }
    assert!(!info.valid);
    assert!(info.violations > 0);
}

#[test]
fn construct_and_json_round_trip() {
    let method = CString::new("dev-2k1").unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(sp_construct(17, 8, method.as_ptr(), &mut s), SpStatus::Ok);
        assert_eq!(sp_system_len(s), 16);
        let mut json = ptr::null_mut();
        assert_eq!(sp_serialize_json(s, &mut json), SpStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(sp_parse(json, &mut back), SpStatus::Ok);
        assert_eq!(sp_system_len(back), 16);
        sp_string_free(json);

        let mut text = ptr::null_mut();
        assert_eq!(sp_serialize_text(back, &mut text), SpStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().contains("17 8 16"));
        sp_string_free(text);
        sp_system_free(back);
        sp_system_free(s);
    }
}

#[test]
fn construct_rejects_mismatched_method() {
    let method = CString::new("dev-2k1").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { sp_construct(10, 4, method.as_ptr(), &mut s) },
        SpStatus::InvalidArgument
    );
    let bogus = CString::new("bogus").unwrap();
    assert_eq!(
        unsafe { sp_construct(10, 4, bogus.as_ptr(), &mut s) },
        SpStatus::InvalidArgument
    );
    assert!(s.is_null());
    unsafe {
        assert_eq!(sp_construct(16, 4, ptr::null(), &mut s), SpStatus::Ok);
        assert_eq!(sp_system_len(s), 64);
        sp_system_free(s);
    }
}

#[test]
fn bounds_values() {
    let mut b = SpBounds::default();
    unsafe {
        assert_eq!(sp_bounds(9, 4, &mut b), SpStatus::Ok);
        assert_eq!((b.lower, b.upper, b.exact), (8, 8, true));
        assert_eq!(sp_bounds(11, 4, &mut b), SpStatus::Ok);
        assert_eq!((b.lower, b.upper, b.exact), (11, 27, false));
        assert_eq!(sp_bounds(128, 2, &mut b), SpStatus::Ok);
        assert!(b.upper_saturated);
        assert_eq!(sp_bounds(9, 4, ptr::null_mut()), SpStatus::NullPointer);
    }
}

#[test]
fn search_small_exact() {
    let mut info = SpSearchInfo::default();
    let mut best = ptr::null_mut();
    unsafe {
        assert_eq!(
            sp_search(7, 3, 2, 0.0, 0, &mut info, &mut best),
            SpStatus::Ok
        );
        assert_eq!(info.size, 5);
        assert!(info.proven_optimal);
        assert_eq!(info.candidates, 105);
        let mut v = SpVerifyInfo::default();
        assert_eq!(sp_verify(best, &mut v), SpStatus::Ok);
        assert!(v.valid);
        sp_system_free(best);
        assert_eq!(
            sp_search(3, 3, 2, 0.0, 0, &mut info, ptr::null_mut()),
            SpStatus::InvalidArgument
        );
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        sp_system_free(ptr::null_mut());
        sp_string_free(ptr::null_mut());
        assert_eq!(sp_system_len(ptr::null()), 0);
        let mut info = SpVerifyInfo::default();
        assert_eq!(sp_verify(ptr::null(), &mut info), SpStatus::NullPointer);
    }
    assert!(last_error().contains("null"));
    assert!(!unsafe { CStr::from_ptr(sp_version()) }
        .to_bytes()
        .is_empty());
}

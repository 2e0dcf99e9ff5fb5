use std::ffi::{c_char, CStr, CString};
use std::ptr;

use schubert_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe {
        schubert_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn parse(shape: &str, conditions: &str) -> (SchubertErrorCode, *mut SchubertProblemHandle) {
    let mut h = ptr::null_mut();
    let code = unsafe { schubert_problem_parse(c(shape).as_ptr(), c(conditions).as_ptr(), &mut h) };
    (code, h)
}

#[test]
fn degree_and_criterion_round_trip() {
    let (code, h) = parse("G(4,8)", "(2,2)^4");
    assert_eq!(code, SchubertErrorCode::Ok);
    let mut d = 0u64;
    let mut v = SchubertVerdict::Pass;
    unsafe {
        assert_eq!(schubert_problem_degree(h, &mut d), SchubertErrorCode::Ok);
        assert_eq!(schubert_problem_criterion(h, &mut v), SchubertErrorCode::Ok);
        schubert_problem_free(h);
    }
    assert_eq!(d, 6);
    assert_eq!(v, SchubertVerdict::Fail);

    let (_, h) = parse("G(2,4)", "(1)^4");
    unsafe {
        assert_eq!(schubert_problem_criterion(h, &mut v), SchubertErrorCode::Ok);
        schubert_problem_free(h);
    }
    assert_eq!(v, SchubertVerdict::Pass);
}

#[test]
fn text_outputs_report_needed_length() {
    let (_, h) = parse("G(3,6)", "(1)^9");
    let mut needed = 0usize;
    unsafe {
        let code = schubert_problem_degree_text(h, ptr::null_mut(), 0, &mut needed);
        assert_eq!(code, SchubertErrorCode::BufferTooSmall);
        assert_eq!(needed, 3);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(
            schubert_problem_degree_text(h, buf.as_mut_ptr(), buf.len(), ptr::null_mut()),
            SchubertErrorCode::Ok
        );
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "42");
        let mut buf = vec![0 as c_char; 64];
        assert_eq!(
            schubert_problem_text(h, buf.as_mut_ptr(), buf.len(), &mut needed),
            SchubertErrorCode::Ok
        );
        assert_eq!(
            CStr::from_ptr(buf.as_ptr()).to_str().unwrap(),
            "G(3,6): (1)^9"
        );
        schubert_problem_free(h);
    }
}

#[test]
fn errors_are_coded_and_described() {
    let (code, h) = parse("G(2,4)", "(3)^4");
    assert_eq!(code, SchubertErrorCode::InvalidInput);
    assert!(h.is_null());
    assert!(last_error().contains("does not fit"), "{}", last_error());

    let (code, _) = parse("G(2,4)", "(1)^4 (1");
    assert_eq!(code, SchubertErrorCode::InvalidInput);
    assert!(last_error().contains("syntax error"));

    let mut h = ptr::null_mut();
    let code = unsafe { schubert_problem_parse(ptr::null(), c("(1)^4").as_ptr(), &mut h) };
    assert_eq!(code, SchubertErrorCode::NullPointer);
    let bad = [0xffu8 as c_char, 0];
    let code = unsafe { schubert_problem_parse(bad.as_ptr(), c("(1)^4").as_ptr(), &mut h) };
    assert_eq!(code, SchubertErrorCode::InvalidUtf8);

    let mut d = 0;
    assert_eq!(
        unsafe { schubert_problem_degree(ptr::null(), &mut d) },
        SchubertErrorCode::NullPointer
    );
    let (_, ok) = parse("G(2,4)", "(1)^4");
    assert_eq!(
        unsafe { schubert_problem_degree(ok, &mut d) },
        SchubertErrorCode::Ok
    );
    assert_eq!(last_error(), "");
    unsafe {
        schubert_problem_free(ok);
        schubert_problem_free(ptr::null_mut());
    }
}

#[test]
fn lr_and_tree() {
    let mut coef = 0u64;
    let code = unsafe {
        schubert_lr_coefficient(
            c("G(3,6)").as_ptr(),
            c("(2,1)").as_ptr(),
            c("(2,1)").as_ptr(),
            c("(3,2,1)").as_ptr(),
            &mut coef,
        )
    };
    assert_eq!(code, SchubertErrorCode::Ok);
    assert_eq!(coef, 2);

    let (_, p) = parse("G(4,8)", "(2,2)^4");
    let mut t = ptr::null_mut();
    let (mut leaves, mut vertices) = (0u64, 0u64);
    unsafe {
        assert_eq!(schubert_tree_build(p, &mut t), SchubertErrorCode::Ok);
        assert_eq!(
            schubert_tree_counts(t, &mut leaves, &mut vertices),
            SchubertErrorCode::Ok
        );
        schubert_tree_free(t);
        schubert_problem_free(p);
    }
    assert_eq!(leaves, 6);
    assert!(vertices > leaves);
}

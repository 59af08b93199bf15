use std::ffi::{CStr, CString};
use std::ptr;

use pentagons_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ptg_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    ptg_string_free(s);
    out
}

#[test]
fn construct_count_and_round_trip() {
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(ptg_parabolic(16, &mut set), PtgStatus::Ok);
        assert_eq!(ptg_point_set_len(set), 16);
        let mut count = 0;
        assert_eq!(ptg_count_convex(set, 5, &mut count), PtgStatus::Ok);
        assert_eq!(count, 112);

        let mut json = ptr::null_mut();
        assert_eq!(ptg_point_set_to_json(set, &mut json), PtgStatus::Ok);
        let text = CString::new(take_string(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(ptg_point_set_from_json(text.as_ptr(), &mut back), PtgStatus::Ok);
        let mut again = 0;
        assert_eq!(ptg_count_convex(back, 5, &mut again), PtgStatus::Ok);
        assert_eq!(again, 112);

        let mut sig = ptr::null_mut();
        assert_eq!(ptg_signotope_of(set, &mut sig), PtgStatus::Ok);
        let mut pentagons = 0;
        assert_eq!(ptg_count_convex_pentagons(sig, &mut pentagons), PtgStatus::Ok);
        assert_eq!(pentagons, 112);
        assert_eq!(ptg_signotope_n(sig), 16);

        ptg_signotope_free(sig);
        ptg_point_set_free(back);
        ptg_point_set_free(set);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut set = ptr::null_mut();
        assert_eq!(ptg_pinwheel(0, &mut set), PtgStatus::InvalidArgument);
        assert!(last_error().contains("k >= 1"));
        assert!(set.is_null());
        assert_eq!(ptg_pinwheel(2, ptr::null_mut()), PtgStatus::NullPointer);
        let bad = CString::new("{\"points\": 3}").unwrap();
        assert_eq!(ptg_point_set_from_json(bad.as_ptr(), &mut set), PtgStatus::ParseError);
        assert!(!last_error().is_empty());
        assert_eq!(ptg_pinwheel(2, &mut set), PtgStatus::Ok);
        assert_eq!(last_error(), "");
        ptg_point_set_free(set);

        let mut count = 0;
        assert_eq!(ptg_count_convex(ptr::null(), 5, &mut count), PtgStatus::NullPointer);
        assert_eq!(ptg_point_set_len(ptr::null()), 0);
        ptg_point_set_free(ptr::null_mut());
        ptg_signotope_free(ptr::null_mut());
        ptg_string_free(ptr::null_mut());
    }
}

#[test]
fn signotope_text_and_axioms() {
    unsafe {
        let text = CString::new("4\n-+++-\n").unwrap();
        let mut sig = ptr::null_mut();
        assert_eq!(ptg_signotope_from_text(text.as_ptr(), &mut sig), PtgStatus::ParseError);
        let text = CString::new("4\n-++-\n").unwrap();
        assert_eq!(ptg_signotope_from_text(text.as_ptr(), &mut sig), PtgStatus::Ok);
        let mut violations = 0;
        assert_eq!(ptg_signotope_axiom_violations(sig, &mut violations), PtgStatus::Ok);
        assert_eq!(violations, 2);
        let mut count = 0;
        assert_eq!(ptg_count_convex_pentagons(sig, &mut count), PtgStatus::Inconsistent);
        let mut out = ptr::null_mut();
        assert_eq!(ptg_realize(sig, 0, &mut out), PtgStatus::Inconsistent);
        let mut printed = ptr::null_mut();
        assert_eq!(ptg_signotope_to_text(sig, &mut printed), PtgStatus::Ok);
        assert_eq!(take_string(printed), "4\n-++-\n");
        ptg_signotope_free(sig);
    }
}

#[test]
fn encodings() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ptg_encode_wcnf(9, true, &mut s), PtgStatus::Ok);
        assert!(take_string(s).starts_with("p wcnf 210 2170 127\n"));
        assert_eq!(ptg_encode_dimacs(6, false, &mut s), PtgStatus::Ok);
        assert!(take_string(s).starts_with("p cnf 20 48\n"));
        assert_eq!(ptg_encode_wcnf(3, true, &mut s), PtgStatus::InvalidArgument);
    }
}

#[test]
fn solve_search_and_realize() {
    unsafe {
        let mut optimum = 0;
        let mut witness = ptr::null_mut();
        assert_eq!(ptg_solve_exact(9, true, -1, 0, &mut optimum, &mut witness), PtgStatus::Ok);
        assert_eq!(optimum, 1);
        let mut count = 0;
        assert_eq!(ptg_count_convex_pentagons(witness, &mut count), PtgStatus::Ok);
        assert_eq!(count, 1);
        ptg_signotope_free(witness);

        assert_eq!(ptg_solve_exact(10, true, 2, 0, &mut optimum, ptr::null_mut()), PtgStatus::Ok);
        assert_eq!(optimum, 2);
        assert_eq!(ptg_solve_exact(10, true, -1, 10, &mut optimum, ptr::null_mut()), PtgStatus::BudgetExceeded);

        let mut best = 0;
        let mut assignment = ptr::null_mut();
        assert_eq!(ptg_sls_minimize(11, 1, 1_000_000, 7, &mut best, &mut assignment), PtgStatus::Ok);
        assert_eq!(best, 7);
        ptg_signotope_free(assignment);

        let mut set = ptr::null_mut();
        assert_eq!(ptg_pinwheel(2, &mut set), PtgStatus::Ok);
        let mut sig = ptr::null_mut();
        assert_eq!(ptg_signotope_of(set, &mut sig), PtgStatus::Ok);
        let mut realized = ptr::null_mut();
        assert_eq!(ptg_realize(sig, 4, &mut realized), PtgStatus::Ok);
        let mut sig2 = ptr::null_mut();
        assert_eq!(ptg_signotope_of(realized, &mut sig2), PtgStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        ptg_signotope_to_text(sig, &mut a);
        ptg_signotope_to_text(sig2, &mut b);
        assert_eq!(take_string(a), take_string(b));
        for s in [sig, sig2] {
            ptg_signotope_free(s);
        }
        ptg_point_set_free(set);
        ptg_point_set_free(realized);
    }
}

#[test]
fn scalars() {
    assert_eq!(ptg_conjectured_mu5(17), 182);
    assert_eq!(ptg_conjectured_mu5(20), 504);
    let v = unsafe { CStr::from_ptr(ptg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_function() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/pentagons.h")).unwrap();
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let names: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(names.len() >= 20);
    for name in names {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct PtgPointSet PtgPointSet;"));
    assert!(header.contains("PTG_STATUS_BUDGET_EXCEEDED = 5"));
}

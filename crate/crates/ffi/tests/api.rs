use std::ffi::{CStr, CString};
use std::ptr;

use egz_ffi::*;

fn parse(spec: &str) -> *mut EgzGroup {
    let s = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { egz_group_parse(s.as_ptr(), &mut g) }, EgzStatus::Ok, "{spec}");
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(egz_last_error()) }.to_str().unwrap().to_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { egz_string_free(p) };
    s
}

#[test]
fn group_round_trip() {
    let g = parse("Z6xZ3");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { egz_group_render(g, &mut s) }, EgzStatus::Ok);
    assert_eq!(take_string(s), "Z2xZ3^2");
    let (mut exp, mut ord) = (0, 0);
    unsafe {
        assert_eq!(egz_group_exponent(g, &mut exp), EgzStatus::Ok);
        assert_eq!(egz_group_order(g, &mut ord), EgzStatus::Ok);
        assert_eq!(egz_group_coordinate_count(g), 2);
        egz_group_free(g);
    }
    assert_eq!((exp, ord), (6, 18));

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { egz_group_new([4u64, 2].as_ptr(), 2, &mut h) }, EgzStatus::Ok);
    unsafe { egz_group_free(h) };
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("Z1").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { egz_group_parse(bad.as_ptr(), &mut g) }, EgzStatus::Parse);
    assert!(g.is_null());
    assert!(last_error().contains('1'), "{}", last_error());

    assert_eq!(unsafe { egz_group_parse(ptr::null(), &mut g) }, EgzStatus::NullOrInvalidArgument);
    let mut x = 0.0;
    assert_eq!(unsafe { egz_naslund_gamma(6, 4, 0.0, &mut x) }, EgzStatus::Domain);
    assert_eq!(unsafe { egz_naslund_gamma(3, 3, 0.0, &mut x) }, EgzStatus::Ok);
    assert!(last_error().is_empty());
    assert!((x - 2.755_104_613).abs() < 1e-6);

    let g = parse("Z4xZ2");
    let mut v = EgzVerdict::Unknown;
    assert_eq!(unsafe { egz_check_property_d(g, 0, 0, &mut v) }, EgzStatus::NotHomocyclic);
    unsafe {
        egz_group_free(g);
        egz_group_free(ptr::null_mut());
        egz_string_free(ptr::null_mut());
    }
}

#[test]
fn exact_values() {
    let g = parse("Z3^2");
    let (mut s, mut eta) = (0, 0);
    unsafe {
        assert_eq!(egz_exact_s(g, &mut s), EgzStatus::Ok);
        assert_eq!(egz_exact_eta(g, &mut eta), EgzStatus::Ok);
    }
    assert_eq!((s, eta), (9, 7));

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { egz_exact(g, EgzQuantity::S, 0, 0, &mut r) }, EgzStatus::Ok);
    let mut st = EgzSearchStatus::BudgetExhausted;
    assert_eq!(unsafe { egz_search_result_status(r, &mut st) }, EgzStatus::Ok);
    assert_eq!(st, EgzSearchStatus::Exact);
    assert_eq!(unsafe { egz_search_result_value(r) }, 9);
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { egz_search_result_to_json(r, &mut js) }, EgzStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(js)).unwrap();
    assert_eq!(v["value"], 9);
    unsafe {
        egz_search_result_free(r);
        egz_group_free(g);
    }
}

#[test]
fn budget_limited_search_reports_lower_bound() {
    let g = parse("Z7^2");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { egz_exact(g, EgzQuantity::S, 1000, 0, &mut r) }, EgzStatus::Ok);
    let mut st = EgzSearchStatus::Exact;
    unsafe { egz_search_result_status(r, &mut st) };
    assert_eq!(st, EgzSearchStatus::LowerBoundOnly);
    let mut v = EgzVerdict::Holds;
    assert_eq!(unsafe { egz_check_property_d(g, 1000, 0, &mut v) }, EgzStatus::Ok);
    assert_eq!(v, EgzVerdict::Unknown);
    let mut known = false;
    assert_eq!(unsafe { egz_known_property_d(g, &mut known) }, EgzStatus::Ok);
    assert!(known);
    unsafe {
        egz_search_result_free(r);
        egz_group_free(g);
    }
}

#[test]
fn zero_sum_with_witness_positions() {
    let g = parse("Z2xZ4");
    // (1,1), (0,3), (1,0), (0,2), (1,2): (1,1)+(1,0)+(0,3) = (0,0) has length 3
    let coords = [1u64, 1, 0, 3, 1, 0, 0, 2, 1, 2];
    let mut found = false;
    let mut witness = [usize::MAX; 5];
    let mut wl = 0;
    let st = unsafe { egz_find_zero_sum(g, coords.as_ptr(), 5, false, 4, &mut found, witness.as_mut_ptr(), &mut wl) };
    assert_eq!(st, EgzStatus::Ok);
    assert!(found);
    assert!((1..=4).contains(&wl));
    let (mut a, mut b) = (0u64, 0u64);
    for &i in &witness[..wl] {
        a += coords[2 * i];
        b += coords[2 * i + 1];
    }
    assert_eq!((a % 2, b % 4), (0, 0));

    let coords = [1u64, 0];
    let st = unsafe { egz_find_zero_sum(g, coords.as_ptr(), 1, true, 4, &mut found, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, EgzStatus::Ok);
    assert!(!found);
    let coords = [1u64, 9];
    let st = unsafe { egz_find_zero_sum(g, coords.as_ptr(), 1, true, 4, &mut found, ptr::null_mut(), ptr::null_mut()) };
    assert_ne!(st, EgzStatus::Ok);
    unsafe { egz_group_free(g) };
}

#[test]
fn best_bounds_json() {
    let g = parse("Z2^3");
    let mut js = ptr::null_mut();
    assert_eq!(
        unsafe { egz_best_bounds_json(g, EgzQuantity::S, EgzPolicy::RegistryOnly, 0.0, &mut js) },
        EgzStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take_string(js)).unwrap();
    assert_eq!(v["best_lower"]["value"], "9");
    assert_eq!(v["best_upper"]["value"], "9");
    unsafe { egz_group_free(g) };
}

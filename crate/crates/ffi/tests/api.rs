#![allow(clippy::excessive_precision)]

use std::ffi::{CStr, CString};
use std::ptr;

use ergosum_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ergosum_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn golden(count: usize) -> *mut ErgosumTable {
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { ergosum_table_new(c("golden").as_ptr(), count, &mut t) },
        ErgosumStatus::Ok
    );
    t
}

#[test]
fn table_round_trip() {
    let t = golden(20);
    unsafe {
        assert_eq!(ergosum_table_len(t), 20);
        let (mut a, mut q, mut norm) = (0u64, 0u64, 0.0f64);
        assert_eq!(ergosum_table_quotient(t, 3, &mut a), ErgosumStatus::Ok);
        assert_eq!(a, 1);
        assert_eq!(ergosum_table_denominator(t, 10, &mut q), ErgosumStatus::Ok);
        assert_eq!(q, 89);
        assert_eq!(ergosum_table_norm(t, 10, &mut norm), ErgosumStatus::Ok);
        assert!((norm - 0.00502499874064149020822825854179).abs() < 1e-17);
        assert_eq!(
            ergosum_table_denominator(t, 99, &mut q),
            ErgosumStatus::InvalidInput
        );
        ergosum_table_free(t);
    }
}

#[test]
fn bad_spec_sets_message() {
    let mut t = ptr::null_mut();
    let status = unsafe { ergosum_table_new(c("sqrt4").as_ptr(), 10, &mut t) };
    assert_eq!(status, ErgosumStatus::InvalidInput);
    assert!(t.is_null());
    assert!(last_error().contains("D must be non-square"));
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        assert_eq!(
            ergosum_table_new(ptr::null(), 10, &mut ptr::null_mut()),
            ErgosumStatus::NullPointer
        );
        assert_eq!(
            ergosum_table_new(c("golden").as_ptr(), 10, ptr::null_mut()),
            ErgosumStatus::NullPointer
        );
        let mut v = 0.0;
        assert_eq!(
            ergosum_sums_variance(ptr::null(), 3, &mut v),
            ErgosumStatus::NullPointer
        );
        assert_eq!(ergosum_table_len(ptr::null()), 0);
        ergosum_table_free(ptr::null_mut());
        ergosum_sums_free(ptr::null_mut());
        ergosum_measure_free(ptr::null_mut());
    }
}

#[test]
fn ostrowski_buffer_protocol() {
    let t = golden(30);
    unsafe {
        let mut len = 0;
        assert_eq!(
            ergosum_ostrowski_expand(t, 4, ptr::null_mut(), 0, &mut len),
            ErgosumStatus::BufferTooSmall
        );
        assert_eq!(len, 4);
        let mut buf = vec![9u64; len];
        assert_eq!(
            ergosum_ostrowski_expand(t, 4, buf.as_mut_ptr(), buf.len(), &mut len),
            ErgosumStatus::Ok
        );
        assert_eq!(buf, [0, 1, 0, 1]);
        ergosum_table_free(t);
    }
}

#[test]
fn sums_match_library() {
    let t = golden(30);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            ergosum_sums_new(t, c("phi0").as_ptr(), &mut s),
            ErgosumStatus::Ok
        );
        // the sums hold their own reference to the table
        ergosum_table_free(t);
        let mut v = 0.0;
        assert_eq!(ergosum_sums_variance(s, 5, &mut v), ErgosumStatus::Ok);
        assert!((v - 0.09959457084490003082878155).abs() < 1e-14);
        let mut scan = vec![0.0; 101];
        assert_eq!(
            ergosum_sums_variance_scan(s, 100, scan.as_mut_ptr(), 101),
            ErgosumStatus::Ok
        );
        assert!((scan[100] - 0.2352851800205339534813011).abs() < 1e-13);
        assert_eq!(
            ergosum_sums_variance_scan(s, 100, scan.as_mut_ptr(), 100),
            ErgosumStatus::BufferTooSmall
        );
        let mut d = 0.0;
        assert_eq!(ergosum_sums_kolmogorov(s, 12, &mut d), ErgosumStatus::Ok);
        assert!(d > 0.0 && d < 0.5);
        ergosum_sums_free(s);
    }
}

#[test]
fn zero_function_has_no_distribution() {
    let t = golden(10);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            ergosum_sums_new(t, c("zero").as_ptr(), &mut s),
            ErgosumStatus::Ok
        );
        let mut d = 0.0;
        assert_eq!(
            ergosum_sums_kolmogorov(s, 3, &mut d),
            ErgosumStatus::ZeroVariance
        );
        ergosum_sums_free(s);
        ergosum_table_free(t);
    }
}

#[test]
fn golden_measure() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(
            ergosum_measure_new(c("golden").as_ptr(), &mut m),
            ErgosumStatus::Ok
        );
        assert_eq!(ergosum_measure_letters(m), 3);
        let (mut lambda, mut h) = (0.0, 0.0);
        assert_eq!(ergosum_measure_lambda(m, &mut lambda), ErgosumStatus::Ok);
        assert!((lambda - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-11);
        assert_eq!(ergosum_measure_entropy(m, &mut h), ErgosumStatus::Ok);
        assert!((h - lambda.ln()).abs() < 1e-10);
        let total: f64 = (0..3)
            .map(|y| {
                let mut mass = 0.0;
                assert_eq!(
                    ergosum_measure_cylinder(m, &y, 1, &mut mass),
                    ErgosumStatus::Ok
                );
                mass
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-11);
        let mut mass = 1.0;
        // 01 followed by 10 breaks the carry rule
        assert_eq!(
            ergosum_measure_cylinder(m, [2usize, 1].as_ptr(), 2, &mut mass),
            ErgosumStatus::Ok
        );
        assert_eq!(mass, 0.0);
        ergosum_measure_free(m);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(ergosum_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use wreathwalk_ffi::*;

fn last_error() -> String {
    let len = unsafe { ww_last_error_message(ptr::null_mut(), 0) };
    let mut buf = vec![0 as c_char; len + 1];
    unsafe { ww_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string()
}

struct Group(*mut WwGroup);

impl Group {
    fn new(spec: &str) -> Group {
        let text = CString::new(spec).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(unsafe { ww_group_new(text.as_ptr(), false, &mut g) }, WwStatus::Ok);
        Group(g)
    }

    fn generator(&self, i: usize) -> *mut WwElement {
        let mut e = ptr::null_mut();
        assert_eq!(unsafe { ww_group_generator(self.0, i, &mut e) }, WwStatus::Ok);
        e
    }

    fn encode(&self, e: *const WwElement) -> String {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { ww_element_encode(self.0, e, &mut s) }, WwStatus::Ok);
        let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        unsafe { ww_string_free(s) };
        text
    }
}

impl Drop for Group {
    fn drop(&mut self) {
        unsafe { ww_group_free(self.0) }
    }
}

#[test]
fn generators_multiply_invert_and_round_trip() {
    let g = Group::new("Z2 wr C2");
    assert_eq!(unsafe { ww_group_generator_count(g.0) }, 16);
    for i in 0..16 {
        let s = g.generator(i);
        let mut inv = ptr::null_mut();
        let mut product = ptr::null_mut();
        let mut id = ptr::null_mut();
        let mut equal = false;
        unsafe {
            assert_eq!(ww_element_invert(g.0, s, &mut inv), WwStatus::Ok);
            assert_eq!(ww_element_multiply(g.0, s, inv, &mut product), WwStatus::Ok);
            assert_eq!(ww_element_identity(g.0, &mut id), WwStatus::Ok);
            assert_eq!(ww_element_equal(product, id, &mut equal), WwStatus::Ok);
        }
        assert!(equal);
        let text = CString::new(g.encode(s)).unwrap();
        let mut back = ptr::null_mut();
        unsafe {
            assert_eq!(ww_element_decode(g.0, text.as_ptr(), &mut back), WwStatus::Ok);
            assert_eq!(ww_element_equal(back, s, &mut equal), WwStatus::Ok);
        }
        assert!(equal);
        let (mut lower, mut upper) = (0.0, 0.0);
        assert_eq!(
            unsafe { ww_word_length_bracket(g.0, s, &mut lower, &mut upper) },
            WwStatus::Ok
        );
        assert!(lower <= 1.0 && 1.0 <= upper);
        for e in [s, inv, product, id, back] {
            unsafe { ww_element_free(e) };
        }
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let bad = CString::new("Z3 wr C2").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ww_group_new(bad.as_ptr(), false, &mut g) }, WwStatus::Parse);
    assert!(g.is_null());
    assert!(last_error().contains("Z3"));

    assert_eq!(
        unsafe { ww_group_new(ptr::null(), false, &mut g) },
        WwStatus::NullPointer
    );
    assert_eq!(last_error(), "spec is null");

    let planar = Group::new("Z2 wr C2");
    let nested = Group::new("Z2 wr Z2 wr C2");
    // a generator that lights a lamp carries an inner lattice element
    let count = unsafe { ww_group_generator_count(nested.0) };
    let s = (0..count)
        .map(|i| nested.generator(i))
        .find(|&e| nested.encode(e).contains("↦"))
        .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ww_element_invert(planar.0, s, &mut out) },
        WwStatus::SpecMismatch
    );
    assert!(out.is_null());
    assert_eq!(
        unsafe { ww_group_generator(planar.0, 99, &mut out) },
        WwStatus::InvalidInput
    );
    assert_eq!(
        unsafe { ww_element_invert(planar.0, s, ptr::null_mut()) },
        WwStatus::SpecMismatch
    );
    let garbage = CString::new("(0,0)|{(0,0)").unwrap();
    assert_eq!(
        unsafe { ww_element_decode(planar.0, garbage.as_ptr(), &mut out) },
        WwStatus::Parse
    );
    unsafe { ww_element_free(s) };

    let mut x = 0.0;
    assert_eq!(unsafe { ww_threshold_ln(0, 1.0, &mut x) }, WwStatus::InvalidInput);
    assert_eq!(unsafe { ww_concave_extension(1, 1.0, -1.0, &mut x) }, WwStatus::Domain);
}

#[test]
fn truncated_error_copy_is_terminated() {
    let mut x = 0.0;
    assert_eq!(unsafe { ww_threshold_ln(1, 2.0, &mut x) }, WwStatus::InvalidInput);
    let full = last_error();
    let mut buf = [1 as c_char; 8];
    let len = unsafe { ww_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert_eq!(len, full.len());
    let short = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert_eq!(short, &full[..7]);
}

#[test]
fn iterated_log_values() {
    let mut v = 0.0;
    assert_eq!(unsafe { ww_threshold_ln(1, 1.0, &mut v) }, WwStatus::Ok);
    assert_eq!(v, 4.0);
    assert_eq!(unsafe { ww_threshold_ln(1, 0.5, &mut v) }, WwStatus::Ok);
    assert_eq!(v, 16.0);
    // L~_(1,1)(e^4) = e^4 / 4
    assert_eq!(unsafe { ww_l_tilde_ln(1, 1.0, 4.0, &mut v) }, WwStatus::Ok);
    assert!((v - (4.0 - 4f64.ln())).abs() < 1e-14);
    // slope 1/8 below the knot e^8
    assert_eq!(unsafe { ww_concave_extension(1, 1.0, 100.0, &mut v) }, WwStatus::Ok);
    assert_eq!(v, 12.5);
    assert_eq!(unsafe { ww_concave_extension(1, 1.0, 1e6, &mut v) }, WwStatus::Ok);
    assert!((v - 1e6 / 1e6f64.ln()).abs() < 1e-6);
}

#[test]
fn monte_carlo_calls_are_exact_where_they_must_be_and_reproducible() {
    let mut range = WwRangeStats::default();
    let mut indicator = WwEstimate::default();
    let mut identity = WwEstimate::default();
    unsafe {
        assert_eq!(ww_range_statistics(1000, 50, 4, &mut range), WwStatus::Ok);
        assert_eq!(
            ww_functional_estimate(WwFunctional::Indicator, 0, 0.0, 1000, 50, 4, &mut indicator),
            WwStatus::Ok
        );
        assert_eq!(
            ww_functional_estimate(WwFunctional::Identity, 0, 0.0, 1000, 50, 4, &mut identity),
            WwStatus::Ok
        );
    }
    assert_eq!(range.mean, indicator.mean);
    assert_eq!(identity.mean, 1001.0);
    assert_eq!(identity.std_error, 0.0);

    let mut a = WwEstimate::default();
    let mut b = WwEstimate::default();
    unsafe {
        assert_eq!(
            ww_functional_estimate(WwFunctional::Extension, 1, 1.0, 4096, 20, 9, &mut a),
            WwStatus::Ok
        );
        assert_eq!(
            ww_functional_estimate(WwFunctional::Extension, 1, 1.0, 4096, 20, 9, &mut b),
            WwStatus::Ok
        );
        assert_eq!(
            ww_functional_estimate(WwFunctional::Sqrt, 0, 0.0, 100, 0, 9, &mut b),
            WwStatus::InvalidInput
        );
    }
    assert_eq!(a.mean, 4097.0 / 8.0);

    let g = Group::new("Z2 wr C2");
    let mut bracket = WwDriftBracket::default();
    assert_eq!(unsafe { ww_drift_bracket(g.0, 1, 100, 1, &mut bracket) }, WwStatus::Ok);
    assert!(bracket.lower_mean <= 1.0 && 1.0 <= bracket.upper_mean);
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(ww_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn null_handles_are_rejected() {
    let mut out = ptr::null_mut();
    let mut equal = false;
    unsafe {
        assert_eq!(ww_element_identity(ptr::null(), &mut out), WwStatus::NullPointer);
        assert_eq!(
            ww_element_equal(ptr::null(), ptr::null(), &mut equal),
            WwStatus::NullPointer
        );
        assert_eq!(ww_group_generator_count(ptr::null()), 0);
        ww_group_free(ptr::null_mut());
        ww_element_free(ptr::null_mut());
        ww_string_free(ptr::null_mut());
    }
}

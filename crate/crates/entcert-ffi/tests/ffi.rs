//! The C surface exercised from Rust: handle lifecycle, error codes and
//! values against the library's own results.

use std::ffi::{CStr, CString};
use std::ptr;

use entcert_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ec_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn new_state(family: &str, d: u32, p: f64) -> *mut EcState {
    let mut handle: *mut EcState = ptr::null_mut();
    let status = unsafe { ec_state_new(cstr(family).as_ptr(), d, p, &mut handle) };
    assert_eq!(status, EcStatus::Ok, "{}", last_error());
    assert!(!handle.is_null());
    handle
}

fn blank_certification() -> EcCertification {
    EcCertification {
        first_pair: 0.0,
        second_pair: 0.0,
        sum: 0.0,
        sigma: 0.0,
        threshold_ent: 0.0,
        threshold_max: 0.0,
        verdict: EcVerdict::Inconclusive,
    }
}

#[test]
fn certify_werner_exact_through_ffi() {
    let state = new_state("rho_w", 2, 0.9);
    let mut cert = blank_certification();
    let status = unsafe { ec_certify_mi(state, cstr("comp,sx").as_ptr(), 1, 0, 0, &mut cert) };
    assert_eq!(status, EcStatus::Ok, "{}", last_error());
    assert_eq!(cert.verdict, EcVerdict::Entangled);
    assert!((cert.sum - 1.427_21).abs() < 1e-4, "sum {}", cert.sum);
    assert_eq!(cert.sigma, 0.0);
    assert!((cert.threshold_ent - 1.0).abs() < 1e-12);
    assert!((cert.threshold_max - 2.0).abs() < 1e-12);
    unsafe { ec_state_free(state) };
}

#[test]
fn sampled_certification_is_deterministic() {
    let state = new_state("rho_w", 2, 1.0);
    let mut a = blank_certification();
    let mut b = blank_certification();
    unsafe {
        assert_eq!(
            ec_certify_mi(state, cstr("default").as_ptr(), 0, 8000, 42, &mut a),
            EcStatus::Ok
        );
        assert_eq!(
            ec_certify_mi(state, cstr("default").as_ptr(), 0, 8000, 42, &mut b),
            EcStatus::Ok
        );
        ec_state_free(state);
    }
    assert_eq!(a.sum, b.sum);
    assert_eq!(a.sigma, b.sigma);
    assert!(a.sigma > 0.0);
}

#[test]
fn pearson_certification_through_ffi() {
    let state = new_state("rho_b", 2, 0.9);
    let mut cert = blank_certification();
    let status =
        unsafe { ec_certify_pearson(state, cstr("comp,sx").as_ptr(), 1, 0, 0, 0, &mut cert) };
    assert_eq!(status, EcStatus::Ok, "{}", last_error());
    assert!((cert.sum - 1.8).abs() < 1e-9);
    assert_eq!(cert.verdict, EcVerdict::Entangled);
    unsafe { ec_state_free(state) };
}

#[test]
fn mi_sum_fills_buffer_for_mub_collections() {
    let state = new_state("rho_w", 3, 0.8);
    let mut values = [0.0f64; 8];
    let mut len = 0usize;
    let mut sum = 0.0f64;
    let status = unsafe {
        ec_mi_sum(
            state,
            cstr("mub3").as_ptr(),
            values.as_mut_ptr(),
            values.len(),
            &mut len,
            &mut sum,
        )
    };
    assert_eq!(status, EcStatus::Ok, "{}", last_error());
    assert_eq!(len, 4);
    assert!((values[..4].iter().sum::<f64>() - sum).abs() < 1e-12);

    // undersized buffer is a shape error, not a write
    let mut tiny = [0.0f64; 2];
    let status = unsafe {
        ec_mi_sum(
            state,
            cstr("mub3").as_ptr(),
            tiny.as_mut_ptr(),
            tiny.len(),
            &mut len,
            &mut sum,
        )
    };
    assert_eq!(status, EcStatus::Shape);
    assert!(last_error().contains("buffer"));
    unsafe { ec_state_free(state) };
}

#[test]
fn analytic_oracles_match_library() {
    let mut v = 0.0f64;
    unsafe {
        assert_eq!(ec_analytic_mi_sum_werner(2, 0.9, &mut v), EcStatus::Ok);
    }
    assert!((v - entcert::analytic_mi_sum_werner(2, 0.9)).abs() < 1e-15);
    unsafe {
        assert_eq!(ec_analytic_mi_sum_rho_c(8, 0.3, &mut v), EcStatus::Ok);
    }
    assert!((v - entcert::analytic_mi_sum_rho_c(8, 0.3)).abs() < 1e-15);

    let mut crossing = 0.0f64;
    unsafe {
        assert_eq!(ec_werner_threshold_crossing(2, &mut crossing), EcStatus::Ok);
    }
    assert!((crossing - 0.779_944).abs() < 1e-4, "crossing {crossing}");
}

#[test]
fn witness_through_ffi() {
    let state = new_state("rho_w", 2, 0.25);
    let mut w = 0.0f64;
    let status = unsafe { ec_witness_expectation(state, &mut w) };
    assert_eq!(status, EcStatus::Ok);
    assert!((w - 0.5).abs() < 1e-12);
    unsafe { ec_state_free(state) };

    let qutrit = new_state("rho_w", 3, 0.25);
    let status = unsafe { ec_witness_expectation(qutrit, &mut w) };
    assert_eq!(status, EcStatus::Dimension);
    unsafe { ec_state_free(qutrit) };
}

#[test]
fn error_paths_set_codes_and_messages() {
    let mut handle: *mut EcState = ptr::null_mut();
    let status = unsafe { ec_state_new(cstr("bogus").as_ptr(), 2, 0.5, &mut handle) };
    assert_eq!(status, EcStatus::Param);
    assert!(last_error().contains("unknown family"), "{}", last_error());
    assert!(handle.is_null());

    let status = unsafe { ec_state_new(cstr("rho_w").as_ptr(), 2, 1.5, &mut handle) };
    assert_eq!(status, EcStatus::Param);

    let status = unsafe { ec_state_new(cstr("rho_a").as_ptr(), 3, 0.5, &mut handle) };
    assert_eq!(status, EcStatus::Dimension);

    let status = unsafe { ec_state_new(ptr::null(), 2, 0.5, &mut handle) };
    assert_eq!(status, EcStatus::NullPointer);

    // NULL state handle
    let mut cert = blank_certification();
    let status =
        unsafe { ec_certify_mi(ptr::null(), cstr("comp,sx").as_ptr(), 1, 0, 0, &mut cert) };
    assert_eq!(status, EcStatus::NullPointer);

    // freeing NULL is a no-op
    unsafe { ec_state_free(ptr::null_mut()) };
}

#[test]
fn version_and_dim_queries() {
    let version = unsafe { CStr::from_ptr(ec_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));

    let state = new_state("max", 4, 1.0);
    assert_eq!(unsafe { ec_state_local_dim(state) }, 4);
    assert_eq!(unsafe { ec_state_local_dim(ptr::null()) }, 0);
    unsafe { ec_state_free(state) };
}

#[test]
fn header_is_generated_with_the_public_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/entcert.h");
    let text = std::fs::read_to_string(&header)
        .unwrap_or_else(|e| panic!("missing generated header {}: {e}", header.display()));
    for symbol in [
        "ec_state_new",
        "ec_state_free",
        "ec_certify_mi",
        "ec_certify_pearson",
        "ec_mi_sum",
        "ec_witness_expectation",
        "ec_analytic_mi_sum_werner",
        "ec_werner_threshold_crossing",
        "ec_last_error_message",
        "EC_STATUS_OK",
        "EC_VERDICT_ENTANGLED",
        "typedef struct EcState EcState",
    ] {
        assert!(text.contains(symbol), "header lacks `{symbol}`");
    }
}

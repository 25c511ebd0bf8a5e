use std::ffi::{CStr, CString};
use std::ptr;

use persuasion_ffi::*;

fn last_error() -> String {
    let p = bp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn uniform_handle_round_trip() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(bp_mixed_uniform(0.0, 0.8, &mut h), BpStatus::Ok);
        let (mut cdf, mut mean, mut area, mut value) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(bp_mixed_cdf(h, 0.4, &mut cdf), BpStatus::Ok);
        assert_eq!(bp_mixed_mean(h, &mut mean), BpStatus::Ok);
        assert_eq!(bp_mixed_cdf_integral(h, 0.8, &mut area), BpStatus::Ok);
        assert_eq!(bp_sender_value(h, 0.3, &mut value), BpStatus::Ok);
        assert!((cdf - 0.5).abs() < 1e-15);
        assert!((mean - 0.4).abs() < 1e-15);
        // ∫₀^0.8 q/0.8 dq = 0.4
        assert!((area - 0.4).abs() < 1e-15);
        assert!((value - 0.625).abs() < 1e-12);
        let mut n = BpNatureResponse { q_lo: 0.0, q_hi: 0.0, weight_lo: 0.0 };
        assert_eq!(bp_nature_best_response(h, 0.3, &mut n), BpStatus::Ok);
        assert!((n.q_lo - 0.0).abs() < 1e-12 && (n.q_hi - 0.8).abs() < 1e-12);
        assert!((n.weight_lo - 0.625).abs() < 1e-12);
        bp_mixed_free(h);
    }
}

#[test]
fn mixed_new_validates_mass() {
    unsafe {
        let at = [0.0];
        let am = [0.5];
        let (lo, hi, sm) = ([0.0], [1.0], [0.4]);
        let mut h = ptr::null_mut();
        let s = bp_mixed_new(at.as_ptr(), am.as_ptr(), 1, lo.as_ptr(), hi.as_ptr(), sm.as_ptr(), 1, &mut h);
        assert_eq!(s, BpStatus::InvalidDistribution);
        assert!(h.is_null());
        assert!(last_error().contains("mass"), "{}", last_error());
        let sm = [0.5];
        let s = bp_mixed_new(at.as_ptr(), am.as_ptr(), 1, lo.as_ptr(), hi.as_ptr(), sm.as_ptr(), 1, &mut h);
        assert_eq!(s, BpStatus::Ok);
        let mut mean = 0.0;
        bp_mixed_mean(h, &mut mean);
        assert!((mean - 0.25).abs() < 1e-15);
        bp_mixed_free(h);
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(bp_mixed_mean(ptr::null(), &mut v), BpStatus::NullPointer);
        assert!(last_error().contains("null"));
        assert_eq!(bp_binary_optimal(0.4, 0.3, BpTieRule::Against, ptr::null_mut(), ptr::null_mut()), BpStatus::NullPointer);
        bp_mixed_free(ptr::null_mut());
        bp_prior_free(ptr::null_mut());
        bp_string_free(ptr::null_mut());
    }
}

#[test]
fn binary_and_oracle_agree() {
    unsafe {
        let mut v = 0.0;
        let mut d = ptr::null_mut();
        assert_eq!(bp_binary_optimal(0.3, 0.6, BpTieRule::Against, &mut v, &mut d), BpStatus::Ok);
        let mut o = 0.0;
        assert_eq!(bp_oracle_value_binary(0.3, 0.6, BpTieRule::Against, 201, &mut o), BpStatus::Ok);
        assert!((v - o).abs() <= 3.0 / 201.0, "{v} vs {o}");
        let mut sv = 0.0;
        bp_sender_value(d, 0.6, &mut sv);
        assert!((sv - v).abs() < 1e-12);
        bp_mixed_free(d);
        assert_eq!(bp_binary_optimal(1.2, 0.6, BpTieRule::Against, &mut v, ptr::null_mut()), BpStatus::Domain);
    }
}

#[test]
fn continuous_prior_solve() {
    unsafe {
        let coeffs = [0.0, 0.0, 1.0];
        let mut p = ptr::null_mut();
        assert_eq!(bp_prior_polynomial_cdf(coeffs.as_ptr(), 3, &mut p), BpStatus::Ok);
        let mut mean = 0.0;
        bp_prior_mean(p, &mut mean);
        assert!((mean - 2.0 / 3.0).abs() < 1e-12);
        let (mut v, mut regime) = (0.0, BpRegime::Heuristic);
        assert_eq!(bp_solve_continuous(p, 0.5, 1e-10, &mut v, &mut regime, ptr::null_mut()), BpStatus::Ok);
        assert_eq!(regime, BpRegime::FullDisclosure);
        assert_eq!(v, 0.5);
        bp_prior_free(p);

        let mut p = ptr::null_mut();
        assert_eq!(bp_prior_truncated_normal(1.0 / 3.0, 0.14, &mut p), BpStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(bp_solve_continuous(p, 0.1, 1e-10, &mut v, &mut regime, &mut d), BpStatus::Ok);
        assert_eq!(regime, BpRegime::SmallRStar);
        let mut dm = 0.0;
        bp_mixed_mean(d, &mut dm);
        bp_prior_mean(p, &mut mean);
        assert!((dm - mean).abs() < 1e-10);
        let mut o = 0.0;
        assert_eq!(bp_oracle_value_prior(p, 0.1, BpTieRule::Against, 101, &mut o), BpStatus::Ok);
        assert!((o - v).abs() <= 4.0 / 101.0, "{o} vs {v}");
        bp_mixed_free(d);
        bp_prior_free(p);

        let q = [0.0, 1.0];
        let f = [1.0, 1.0];
        let mut p = ptr::null_mut();
        assert_eq!(bp_prior_piecewise_linear_density(q.as_ptr(), f.as_ptr(), 2, &mut p), BpStatus::Ok);
        bp_prior_free(p);
    }
}

#[test]
fn json_scenario_solve() {
    unsafe {
        let doc = CString::new(r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3}"#).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(bp_solve_scenario_json(doc.as_ptr(), &mut out), BpStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        bp_string_free(out);
        assert!(text.contains("\"value\": 0.625"), "{text}");

        let bad = CString::new(r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3, "extra": 1}"#).unwrap();
        assert_eq!(bp_solve_scenario_json(bad.as_ptr(), &mut out), BpStatus::Parse);
        let bad = CString::new(r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 1.3}"#).unwrap();
        assert_eq!(bp_solve_scenario_json(bad.as_ptr(), &mut out), BpStatus::Domain);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/persuasion.h")).unwrap();
    for name in [
        "bp_last_error_message",
        "bp_mixed_new",
        "bp_mixed_uniform",
        "bp_mixed_free",
        "bp_mixed_cdf",
        "bp_mixed_mean",
        "bp_mixed_cdf_integral",
        "bp_sender_value",
        "bp_nature_best_response",
        "bp_binary_optimal",
        "bp_prior_truncated_normal",
        "bp_prior_polynomial_cdf",
        "bp_prior_piecewise_linear_density",
        "bp_prior_free",
        "bp_prior_mean",
        "bp_solve_continuous",
        "bp_oracle_value_binary",
        "bp_oracle_value_prior",
        "bp_solve_scenario_json",
        "bp_string_free",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/persuasion.h");
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .status()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(status.success());
}

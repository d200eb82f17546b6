use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use abnorm_ffi::*;

fn e3() -> *mut AbnMatrix {
    let re = [0., 0., 0., 2., 0., 0., 0., 1., 0.];
    let mut m = ptr::null_mut();
    let s = unsafe { abn_matrix_new(3, re.as_ptr(), ptr::null(), &mut m) };
    assert_eq!(s, AbnStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> Option<String> {
    let p = abn_last_error();
    if p.is_null() {
        None
    } else {
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}

#[test]
fn e3_values() {
    let m = e3();
    unsafe {
        assert_eq!(abn_matrix_dim(m), 3);
        let mut v = 0.0;
        assert_eq!(abn_operator_norm(m, &mut v), AbnStatus::Ok);
        assert!((v - 2.0).abs() < 1e-9);
        assert_eq!(abn_numerical_radius(m, &mut v), AbnStatus::Ok);
        assert!((v - 5f64.sqrt() / 2.0).abs() < 1e-9);
        assert_eq!(abn_crawford_number(m, &mut v), AbnStatus::Ok);
        assert!(v.abs() < 1e-9);
        assert_eq!(abn_alpha_beta_norm(m, 0.0, 1.0, 0, 7, &mut v), AbnStatus::Ok);
        assert!((v - 2.0).abs() < 1e-6);
        assert_eq!(abn_alpha_beta_norm(m, 1.0, 0.0, 0, 7, &mut v), AbnStatus::Ok);
        assert!((v - 5f64.sqrt() / 2.0).abs() < 1e-6);
        let mut t = -1.0;
        assert_eq!(abn_infimum_mix(m, AbnMixKind::Est5, &mut v, &mut t), AbnStatus::Ok);
        assert!(v >= 5f64.sqrt() / 2.0 - 1e-9);
        assert!((0.0..=1.0).contains(&t));
        assert_eq!(abn_infimum_mix(m, AbnMixKind::Est4, &mut v, ptr::null_mut()), AbnStatus::Ok);
        assert_eq!(abn_refined_lower_bound(m, &mut v), AbnStatus::Ok);
        assert!(v <= 1.25 + 1e-9);
        abn_matrix_free(m);
    }
}

#[test]
fn json_input() {
    let src = CString::new(r#"{"n": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}"#).unwrap();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(abn_matrix_from_json(src.as_ptr(), &mut m), AbnStatus::Ok);
        let mut v = 0.0;
        assert_eq!(abn_numerical_radius(m, &mut v), AbnStatus::Ok);
        assert!((v - 1.0).abs() < 1e-9);
        abn_matrix_free(m);
    }
    let bad = CString::new(r#"{"n": 2, "entries": [[[1, 0]]]}"#).unwrap();
    let mut m = ptr::null_mut();
    let s = unsafe { abn_matrix_from_json(bad.as_ptr(), &mut m) };
    assert_eq!(s, AbnStatus::ParseError);
    assert!(m.is_null());
    assert!(last_error().is_some());
}

#[test]
fn error_codes() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(abn_operator_norm(ptr::null(), &mut v), AbnStatus::NullPointer);
        assert!(last_error().is_some());
        let m = e3();
        assert_eq!(abn_operator_norm(m, ptr::null_mut()), AbnStatus::NullPointer);
        assert_eq!(abn_alpha_beta_norm(m, 0.0, 0.0, 0, 1, &mut v), AbnStatus::InvalidArgument);
        assert_eq!(abn_alpha_beta_norm(m, -1.0, 1.0, 0, 1, &mut v), AbnStatus::InvalidArgument);
        assert_eq!(abn_operator_norm(m, &mut v), AbnStatus::Ok);
        assert!(last_error().is_none());
        abn_matrix_free(m);

        let re = [0.0; 1];
        let mut out = ptr::null_mut();
        assert_eq!(abn_matrix_new(0, re.as_ptr(), ptr::null(), &mut out), AbnStatus::DimensionError);
        let nan = [f64::NAN];
        assert_eq!(abn_matrix_new(1, nan.as_ptr(), ptr::null(), &mut out), AbnStatus::ParseError);
        assert_eq!(abn_matrix_new(1, ptr::null(), ptr::null(), &mut out), AbnStatus::NullPointer);
        assert_eq!(abn_matrix_dim(ptr::null()), 0);
        abn_matrix_free(ptr::null_mut());
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(abn_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/abnorm.h");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("check.c");
    std::fs::write(&src, format!("#include \"{header}\"\nint main(void) {{ return abn_matrix_dim(NULL) == 0 ? 0 : 1; }}\n")).unwrap();
    let status = match Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg("-Werror").arg(&src).status() {
        Ok(s) => s,
        Err(_) => {
            eprintln!("cc not available, skipping header check");
            return;
        }
    };
    assert!(status.success());
}

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use esdlab_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe { esdlab_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(esdlab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn diagonal_matrix_round_trip() {
    let re = [1.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 3.0];
    let im = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5];
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(esdlab_matrix_new(3, 3, re.as_ptr(), im.as_ptr(), &mut m), EsdlabStatus::Ok);
        let (mut r, mut c) = (0, 0);
        assert_eq!(esdlab_matrix_shape(m, &mut r, &mut c), EsdlabStatus::Ok);
        assert_eq!((r, c), (3, 3));
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(esdlab_matrix_get(m, 2, 2, &mut a, &mut b), EsdlabStatus::Ok);
        assert_eq!((a, b), (3.0, 0.5));
        assert_eq!(esdlab_matrix_get(m, 3, 0, &mut a, &mut b), EsdlabStatus::InvalidArgument);

        let (mut er, mut ei) = ([0.0; 3], [0.0; 3]);
        assert_eq!(esdlab_eigenvalues(m, er.as_mut_ptr(), ei.as_mut_ptr(), 3), EsdlabStatus::Ok);
        let mut eig: Vec<(f64, f64)> = er.iter().copied().zip(ei).collect();
        eig.sort_by(|x, y| x.0.total_cmp(&y.0));
        for ((x, y), (ex, ey)) in eig.iter().zip([(-2.0, 0.0), (1.0, 0.0), (3.0, 0.5)]) {
            assert!((x - ex).abs() < 1e-12 && (y - ey).abs() < 1e-12, "{x} {y}");
        }
        assert_eq!(esdlab_eigenvalues(m, er.as_mut_ptr(), ei.as_mut_ptr(), 2), EsdlabStatus::BufferTooSmall);

        let mut s = [0.0; 3];
        assert_eq!(esdlab_singular_values(m, s.as_mut_ptr(), 3), EsdlabStatus::Ok);
        let top = (9.0f64 + 0.25).sqrt();
        assert!((s[0] - top).abs() < 1e-12 && (s[1] - 2.0).abs() < 1e-12 && (s[2] - 1.0).abs() < 1e-12);

        let mut ld = 0.0;
        assert_eq!(esdlab_log_abs_det(m, &mut ld), EsdlabStatus::Ok);
        assert!((ld - (2.0 * top).ln()).abs() < 1e-12);
        esdlab_matrix_free(m);
    }
}

#[test]
fn singular_matrix_has_minus_infinite_log_det() {
    let re = [1.0, 2.0, 2.0, 4.0];
    let mut m = ptr::null_mut();
    let mut ld = 0.0;
    unsafe {
        assert_eq!(esdlab_matrix_new(2, 2, re.as_ptr(), ptr::null(), &mut m), EsdlabStatus::Ok);
        assert_eq!(esdlab_log_abs_det(m, &mut ld), EsdlabStatus::Ok);
        esdlab_matrix_free(m);
    }
    assert!(ld.is_infinite() && ld < 0.0 || ld < -30.0, "{ld}");
}

#[test]
fn iid_draws_are_reproducible() {
    let dist = CString::new(r#"{"kind":"bernoulli"}"#).unwrap();
    let draw = || unsafe {
        let mut rng = ptr::null_mut();
        assert_eq!(esdlab_rng_new(7, 3, &mut rng), EsdlabStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(esdlab_matrix_iid(4, dist.as_ptr(), rng, &mut m), EsdlabStatus::Ok);
        let mut out = Vec::new();
        for k in 0..16 {
            let (mut a, mut b) = (0.0, 0.0);
            esdlab_matrix_get(m, k / 4, k % 4, &mut a, &mut b);
            out.push((a, b));
        }
        esdlab_matrix_free(m);
        esdlab_rng_free(rng);
        out
    };
    let a = draw();
    assert_eq!(a, draw());
    assert!(a.iter().all(|&(x, y)| x.abs() == 1.0 && y == 0.0));
}

#[test]
fn bad_distribution_is_a_config_error() {
    let dist = CString::new(r#"{"kind":"cauchy"}"#).unwrap();
    unsafe {
        let mut rng = ptr::null_mut();
        esdlab_rng_new(1, 1, &mut rng);
        let mut m = ptr::null_mut();
        assert_eq!(esdlab_matrix_iid(4, dist.as_ptr(), rng, &mut m), EsdlabStatus::Config);
        assert!(m.is_null());
        esdlab_rng_free(rng);
    }
    assert!(last_error().contains("distribution"), "{}", last_error());
}

#[test]
fn null_pointers_are_rejected() {
    unsafe {
        assert_eq!(esdlab_rng_new(0, 0, ptr::null_mut()), EsdlabStatus::NullPointer);
        let mut x = 0.0;
        assert_eq!(esdlab_log_abs_det(ptr::null(), &mut x), EsdlabStatus::NullPointer);
        assert_eq!(esdlab_run_exit_code(ptr::null()), -1);
        esdlab_matrix_free(ptr::null_mut());
        esdlab_run_free(ptr::null_mut());
    }
    assert!(last_error().contains("NULL"));
}

#[test]
fn last_error_truncates_and_reports_full_length() {
    unsafe { esdlab_matrix_new(2, 2, ptr::null(), ptr::null(), ptr::null_mut()) };
    let mut buf = [0 as c_char; 4];
    let full = unsafe { esdlab_last_error(buf.as_mut_ptr(), buf.len()) };
    assert_eq!(full, "out is NULL".len());
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "out");
}

#[test]
fn marchenko_pastur_fixed_point() {
    // H = δ₀, c = 1 is Marchenko–Pastur; Im w < 0 is outside the domain.
    let (atoms, weights) = ([0.0], [1.0]);
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(esdlab_ds_problem_new(atoms.as_ptr(), weights.as_ptr(), 1, 1.0, &mut p), EsdlabStatus::Ok);
        let (mut mr, mut mi) = (0.0, 0.0);
        assert_eq!(esdlab_ds_solve(p, 2.0, 0.01, &mut mr, &mut mi), EsdlabStatus::Ok);
        let want = esdlab::limits::mp_reference(esdlab::Complex64::new(2.0, 0.01));
        assert!((mr - want.re).abs() < 1e-8 && (mi - want.im).abs() < 1e-8, "{mr} {mi} vs {want}");
        assert_eq!(esdlab_ds_solve(p, 2.0, -0.01, &mut mr, &mut mi), EsdlabStatus::Config);
        esdlab_ds_problem_free(p);
    }
}

#[test]
fn experiment_run_reports_exit_code() {
    let cfg = CString::new(r#"{"schema":"esdlab.config/1","experiment":"lemmas","lemmas":{"cases":20,"max_size":6}}"#).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().to_str().unwrap()).unwrap();
    unsafe {
        let mut run = ptr::null_mut();
        let status = esdlab_run_experiment(cfg.as_ptr(), path.as_ptr(), &mut run);
        assert_eq!(status, EsdlabStatus::Ok, "{}", last_error());
        let (mut total, mut passed) = (0, 0);
        assert_eq!(esdlab_run_assertions(run, &mut total, &mut passed), EsdlabStatus::Ok);
        assert!(total > 0);
        assert_eq!(esdlab_run_exit_code(run), if passed == total { 0 } else { 1 });
        esdlab_run_free(run);
    }
    assert!(dir.path().join("manifest.json").exists());
    assert!(dir.path().join("trials.csv").exists());
}

#[test]
fn malformed_config_is_a_config_error() {
    let cfg = CString::new(r#"{"experiment":"nope"}"#).unwrap();
    let mut run = ptr::null_mut();
    assert_eq!(unsafe { esdlab_run_experiment(cfg.as_ptr(), ptr::null(), &mut run) }, EsdlabStatus::Config);
    assert!(run.is_null());
}

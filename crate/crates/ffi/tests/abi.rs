use std::ffi::{c_void, CStr};
use std::ptr;

use holophase_ffi::*;

const K: [f64; 3] = [0.0, 0.0, 1.0];
const ORIGIN: [f64; 3] = [0.0, 0.0, 0.0];
const X_AXIS: [f64; 3] = [1.0, 0.0, 0.0];

fn plan(grid: &[f64], order: usize) -> HpPlan {
    HpPlan {
        s_grid: grid.as_ptr(),
        s_len: grid.len(),
        tau: 0.0,
        order,
        richardson: true,
        phase_lock: true,
        tolerance: 0.0,
        near_zone: 0.0,
        joint_refit: true,
    }
}

fn last_error() -> String {
    let p = hp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn monopole_scene() -> *mut HpScene {
    let mut scene = ptr::null_mut();
    unsafe {
        assert_eq!(hp_scene_new(K.as_ptr(), ORIGIN.as_ptr(), 1.0, &mut scene), HpStatus::Ok);
        assert_eq!(hp_scene_add_mode(scene, 0, 0, 0.5, 0.0), HpStatus::Ok);
    }
    scene
}

#[test]
fn scene_evaluates_monopole() {
    let scene = monopole_scene();
    let x = [3.0, 0.0, 0.0];
    let (mut re, mut im) = (0.0, 0.0);
    let mut intensity = 0.0;
    unsafe {
        assert_eq!(hp_scene_eval_radiated(scene, x.as_ptr(), &mut re, &mut im), HpStatus::Ok);
        assert_eq!(hp_scene_intensity(scene, x.as_ptr(), &mut intensity), HpStatus::Ok);
        hp_scene_free(scene);
    }
    // h0(3) = -i e^{3i} / 3, Y00 = 1/sqrt(4 pi)
    let y00 = 0.5 / (4.0 * std::f64::consts::PI).sqrt();
    let (s, c) = 3.0f64.sin_cos();
    assert!((re - y00 * s / 3.0).abs() < 1e-14);
    assert!((im + y00 * c / 3.0).abs() < 1e-14);
    let expect = (1.0 + re).powi(2) + im.powi(2);
    assert!((intensity - expect).abs() < 1e-13);
}

#[test]
fn recovery_round_trip() {
    let scene = monopole_scene();
    let grid = [100.0, 200.0, 400.0];
    let p = plan(&grid, 2);
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(
            hp_recover_scene(scene, ORIGIN.as_ptr(), X_AXIS.as_ptr(), &p, &mut report),
            HpStatus::Ok
        );
        assert_eq!(hp_report_len(report), 2);
        assert!(!hp_report_truncated(report));
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(hp_report_coefficient(report, 0, &mut re, &mut im), HpStatus::Ok);
        let y00 = 0.5 / (4.0 * std::f64::consts::PI).sqrt();
        assert!(re.abs() < 1e-8 && (im + y00).abs() < 1e-8, "{re} {im}");

        let (mut fr, mut fi) = (0.0, 0.0);
        let (mut tr, mut ti) = (0.0, 0.0);
        assert_eq!(hp_report_reconstruct(report, 800.0, &mut fr, &mut fi), HpStatus::Ok);
        let x = [800.0, 0.0, 0.0];
        assert_eq!(hp_scene_eval_radiated(scene, x.as_ptr(), &mut tr, &mut ti), HpStatus::Ok);
        assert!(((fr - tr).powi(2) + (fi - ti).powi(2)).sqrt() < 1e-8);

        assert_eq!(
            hp_report_coefficient(report, 2, &mut re, &mut im),
            HpStatus::IndexOutOfRange
        );
        assert!(last_error().contains("out of range"));
        hp_report_free(report);
        hp_scene_free(scene);
    }
}

unsafe extern "C" fn constant_one(ctx: *mut c_void, _x: *const f64, out: *mut f64) -> i32 {
    *(ctx as *mut usize) += 1;
    *out = 1.0;
    0
}

unsafe extern "C" fn refusing(_ctx: *mut c_void, _x: *const f64, _out: *mut f64) -> i32 {
    7
}

#[test]
fn callback_measurement() {
    let grid = [100.0, 200.0];
    let p = plan(&grid, 1);
    let mut calls = 0usize;
    let mut report = ptr::null_mut();
    unsafe {
        let status = hp_recover_callback(
            Some(constant_one),
            &mut calls as *mut usize as *mut c_void,
            K.as_ptr(),
            ORIGIN.as_ptr(),
            X_AXIS.as_ptr(),
            &p,
            &mut report,
        );
        assert_eq!(status, HpStatus::Ok);
        assert!(calls > 0);
        let (mut re, mut im) = (1.0, 1.0);
        assert_eq!(hp_report_coefficient(report, 0, &mut re, &mut im), HpStatus::Ok);
        assert!(re.hypot(im) < 1e-12);
        hp_report_free(report);

        let status = hp_recover_callback(
            Some(refusing),
            ptr::null_mut(),
            K.as_ptr(),
            ORIGIN.as_ptr(),
            X_AXIS.as_ptr(),
            &p,
            &mut report,
        );
        assert_eq!(status, HpStatus::Measurement);
        assert!(last_error().contains("returned 7"));
    }
}

#[test]
fn error_codes() {
    let scene = monopole_scene();
    let grid = [100.0, 200.0];
    let mut report = ptr::null_mut();
    unsafe {
        let p = plan(&grid, 1);
        assert_eq!(
            hp_recover_scene(scene, ORIGIN.as_ptr(), K.as_ptr(), &p, &mut report),
            HpStatus::DegenerateDirection
        );
        assert!(report.is_null());

        let unsorted = [200.0, 100.0];
        let bad = plan(&unsorted, 1);
        assert_eq!(
            hp_recover_scene(scene, ORIGIN.as_ptr(), X_AXIS.as_ptr(), &bad, &mut report),
            HpStatus::InvalidPlan
        );

        let zero = [0.0; 3];
        let mut other = ptr::null_mut();
        assert_eq!(hp_scene_new(zero.as_ptr(), ORIGIN.as_ptr(), 1.0, &mut other), HpStatus::Domain);
        assert_eq!(hp_scene_add_mode(scene, 40, 0, 1.0, 0.0), HpStatus::UnsupportedDegree);
        assert_eq!(hp_scene_add_mode(scene, 2, 3, 1.0, 0.0), HpStatus::Domain);

        let inside = [0.5, 0.0, 0.0];
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(
            hp_scene_eval_radiated(scene, inside.as_ptr(), &mut re, &mut im),
            HpStatus::OutOfRegion
        );

        assert_eq!(hp_scene_add_mode(ptr::null_mut(), 0, 0, 1.0, 0.0), HpStatus::NullPointer);
        assert_eq!(
            hp_recover_scene(scene, ptr::null(), X_AXIS.as_ptr(), &p, &mut report),
            HpStatus::NullPointer
        );
        assert_eq!(hp_report_len(ptr::null()), 0);
        hp_report_free(ptr::null_mut());
        hp_scene_free(ptr::null_mut());
        hp_scene_free(scene);
    }
}

#[test]
fn auto_tau_matches_formula() {
    let mut tau = 0.0;
    unsafe {
        assert_eq!(hp_choose_tau(K.as_ptr(), X_AXIS.as_ptr(), &mut tau), HpStatus::Ok);
    }
    assert!((tau - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn high_degree_mode_widens_bound() {
    let mut scene = ptr::null_mut();
    unsafe {
        assert_eq!(hp_scene_new(K.as_ptr(), ORIGIN.as_ptr(), 1.0, &mut scene), HpStatus::Ok);
        assert_eq!(hp_scene_add_mode(scene, 12, -3, 0.1, 0.2), HpStatus::Ok);
        let x = [50.0, 1.0, 2.0];
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(hp_scene_eval_radiated(scene, x.as_ptr(), &mut re, &mut im), HpStatus::Ok);
        assert!(re.is_finite() && im.is_finite() && re.hypot(im) > 0.0);
        hp_scene_free(scene);
    }
}

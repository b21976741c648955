use std::ffi::CStr;
use std::ptr;

use orbm_ffi::*;

#[test]
fn constant_angle_round_trip() {
    let values = vec![0.3; 64];
    let mut field = ptr::null_mut();
    let mut pair = ptr::null_mut();
    let mut back = ptr::null_mut();
    unsafe {
        assert_eq!(orbm_field_new(OrbmFieldKind::Angle, values.as_ptr(), values.len(), &mut field), OrbmStatus::Ok);
        assert_eq!(orbm_field_len(field), 64);
        assert_eq!(orbm_theta_to_hmu(field, &mut pair), OrbmStatus::Ok);
        assert!((orbm_pair_mu0(pair) - 0.3f64.tan()).abs() < 1e-12);
        let mut h = 0.0;
        assert_eq!(orbm_pair_eval(pair, 0.2, -0.1, &mut h, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), OrbmStatus::Ok);
        assert!((h - 1.0 / std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(orbm_hmu_to_theta(pair, 64, &mut back), OrbmStatus::Ok);
        let mut out = vec![0.0; 64];
        assert_eq!(orbm_field_values(back, out.as_mut_ptr(), 63), OrbmStatus::BufferTooSmall);
        assert_eq!(orbm_field_values(back, out.as_mut_ptr(), 64), OrbmStatus::Ok);
        assert!(out.iter().all(|v| (v - 0.3).abs() < 1e-6));
        orbm_field_free(back);
        orbm_pair_free(pair);
        orbm_field_free(field);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut field = ptr::null_mut();
    unsafe {
        // 12 samples is not a power of two.
        assert_eq!(orbm_field_new(OrbmFieldKind::Angle, [0.0; 12].as_ptr(), 12, &mut field), OrbmStatus::InvalidArgument);
        assert!(field.is_null());
        let msg = CStr::from_ptr(orbm_last_error_message()).to_str().unwrap();
        assert!(msg.contains("grid"), "{msg}");
        assert_eq!(orbm_field_new(OrbmFieldKind::Angle, ptr::null(), 8, &mut field), OrbmStatus::NullPointer);
        let mut pair = ptr::null_mut();
        assert_eq!(orbm_theta_to_hmu(ptr::null(), &mut pair), OrbmStatus::NullPointer);
        let half_pi = [std::f64::consts::FRAC_PI_2; 8];
        assert_eq!(orbm_field_new(OrbmFieldKind::Angle, half_pi.as_ptr(), 8, &mut field), OrbmStatus::Ok);
        assert_eq!(orbm_theta_to_hmu(field, &mut pair), OrbmStatus::NotInClass);
        orbm_field_free(field);
        orbm_field_free(ptr::null_mut());
    }
}

#[test]
fn simulate_and_read_back() {
    let values = vec![0.0; 64];
    let mut field = ptr::null_mut();
    let mut path = ptr::null_mut();
    unsafe {
        orbm_field_new(OrbmFieldKind::Angle, values.as_ptr(), 64, &mut field);
        assert_eq!(orbm_simulate(field, 0.0, 0.0, 0.1, 1.0, 1, &mut path), OrbmStatus::Simulation);
        assert_eq!(orbm_simulate(field, 0.0, 0.0, 1e-3, 1.0, 1, &mut path), OrbmStatus::Ok);
        let n = orbm_path_len(path);
        assert_eq!(n, 1001);
        let mut xy = vec![0.0; 2 * n];
        let mut lt = vec![0.0; n];
        assert_eq!(orbm_path_samples(path, xy.as_mut_ptr(), lt.as_mut_ptr(), xy.len()), OrbmStatus::Ok);
        assert!(xy.chunks(2).all(|p| p[0].hypot(p[1]) <= 1.0 + 1e-12));
        assert!(lt.windows(2).all(|w| w[1] >= w[0]));
        orbm_path_free(path);
        orbm_field_free(field);
    }
}

#[test]
fn hitting_verdict() {
    let values = vec![0.0; 64];
    let mut field = ptr::null_mut();
    let mut pair = ptr::null_mut();
    let mut verdict = OrbmVerdict::Inconclusive;
    let mut value = 0.0;
    unsafe {
        orbm_field_new(OrbmFieldKind::Angle, values.as_ptr(), 64, &mut field);
        orbm_theta_to_hmu(field, &mut pair);
        assert_eq!(orbm_hitting_test(pair, 0.0, 0.5, &mut verdict, &mut value), OrbmStatus::Ok);
        assert_eq!(verdict, OrbmVerdict::Divergent);
        assert!(!CStr::from_ptr(orbm_version()).to_str().unwrap().is_empty());
        orbm_pair_free(pair);
        orbm_field_free(field);
    }
}

//! Smoothing of reflection fields by the Poisson kernel.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::harmonic::BoundaryField;

/// Trace of the harmonic extension of `theta` on the circle of radius `1 - 1/k`.
///
/// The discrete kernel is positive and normalized, so the output is a strict
/// convex combination and stays inside the open interval.
pub fn mollify(theta: &BoundaryField, k: u32) -> Result<BoundaryField> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("mollification index {k} must be at least 2")));
    }
    let v = theta.values();
    let edge = |s: f64| v.iter().all(|x| (x - s * FRAC_PI_2).abs() < 1e-12);
    if edge(1.0) || edge(-1.0) {
        return Err(Error::NotInT);
    }
    let n = v.len();
    let rho = 1.0 - 1.0 / k as f64;
    let kernel: Vec<f64> = (0..n)
        .map(|j| {
            let t = theta.angle(j);
            (1.0 - rho * rho) / (1.0 - 2.0 * rho * t.cos() + rho * rho)
        })
        .collect();
    let total: f64 = kernel.iter().sum();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut a: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut b: Vec<Complex64> = kernel.iter().map(|&x| Complex64::new(x / total, 0.0)).collect();
    fwd.process(&mut a);
    fwd.process(&mut b);
    let mut c: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    inv.process(&mut c);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let out = c.iter().map(|z| (z.re / n as f64).clamp(lo, hi)).collect();
    BoundaryField::new(theta.kind(), out)
}

/// `(1/2pi) int g(t) theta(t) dt` by the rectangle rule on the grid.
pub fn pairing(theta: &BoundaryField, g: impl Fn(f64) -> f64) -> f64 {
    let n = theta.n_grid();
    theta.values().iter().enumerate().map(|(j, v)| v * g(theta.angle(j))).sum::<f64>() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::FieldKind;

    #[test]
    fn constants_are_fixed() {
        let th = BoundaryField::constant(FieldKind::Angle, 256, 0.7).unwrap();
        for k in [2, 16, 256] {
            let m = mollify(&th, k).unwrap();
            assert!(m.values().iter().all(|x| (x - 0.7).abs() < 1e-12));
        }
    }

    #[test]
    fn continuous_fields_converge_uniformly() {
        let th = BoundaryField::from_fn(FieldKind::Angle, 2048, |t| 1.3 * t.sin().abs() - 0.4).unwrap();
        let m = mollify(&th, 64).unwrap();
        let gap = m.values().iter().zip(th.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // Lipschitz constant 1.3 at scale 1/64, with a log factor at the kinks.
        assert!(gap < 1.3 / 64.0 * (64f64).ln(), "gap {gap}");
        let m2 = mollify(&th, 256).unwrap();
        let gap2 = m2.values().iter().zip(th.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(gap2 < gap);
    }

    #[test]
    fn tangential_semicircles_become_admissible() {
        let th = BoundaryField::semicircle_split(4096).unwrap();
        let m = mollify(&th, 16).unwrap();
        assert!(m.sup_norm() < FRAC_PI_2);
        for j in 1..=8 {
            let f = |t: f64| (j as f64 * t).cos() + (j as f64 * t).sin();
            let exact = pairing(&th, f);
            let approx = pairing(&mollify(&th, 256).unwrap(), f);
            assert!((exact - approx).abs() < 1e-2, "j={j}");
        }
        // the sine pairing is -1 for this field: (1/2pi)(-pi/2 * 2 - pi/2 * 2)
        assert!((pairing(&th, f64::sin) + 1.0).abs() < 1e-3);
    }

    #[test]
    fn tangential_constant_is_rejected() {
        let th = BoundaryField::constant(FieldKind::Angle, 64, FRAC_PI_2).unwrap();
        assert!(matches!(mollify(&th, 8), Err(Error::NotInT)));
    }
}

//! Behaviour of the density on boundary arcs where the angle is tangential.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{in_arc, BoundaryField};
use crate::config::Tolerances;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentialReport {
    /// Radius at which the arc was probed.
    pub radius: f64,
    /// `(angle, h)` at each interior grid point of the arc.
    pub profile: Vec<(f64, f64)>,
    /// `h` on the ray through the midpoint of the arc.
    pub h_mid: f64,
    /// Largest `h` over the middle half of the arc.
    pub max_h_core: f64,
    /// Angle of the zero of `f` on the arc, if any.
    pub zero: Option<f64>,
}

/// `f(z) = h + i h~ - i mu0/pi` straight from the boundary samples.
pub fn f_from_field(theta: &BoundaryField, z: Complex64) -> Complex64 {
    let theta0 = theta.mean();
    let g = theta.cauchy_transform(z);
    (Complex64::new(0.0, -1.0) * g).exp() / (PI * theta0.cos())
}

pub fn tangential_arc_check(theta: &BoundaryField, t0: f64, t1: f64, tol: &Tolerances) -> Result<TangentialReport> {
    let idx: Vec<usize> = (0..theta.n_grid()).filter(|&j| in_arc(theta.angle(j), t0, t1)).collect();
    if idx.len() < 4 {
        return Err(Error::ArcTooShort(idx.len()));
    }
    for &j in &idx {
        if theta.values()[j].abs() < FRAC_PI_2 - 1e-12 {
            return Err(Error::ArcNotTangential(theta.angle(j)));
        }
    }
    if theta.mean().abs() > FRAC_PI_2 - tol.degenerate_angle {
        return Err(Error::DegenerateAngle(theta.mean()));
    }
    let r = tol.tangential_radius;
    let profile: Vec<(f64, f64)> = idx
        .iter()
        .map(|&j| {
            let t = theta.angle(j);
            (t, f_from_field(theta, Complex64::from_polar(r, t)).re)
        })
        .collect();
    let span = (t1 - t0).rem_euclid(std::f64::consts::TAU);
    let mid = t0 + 0.5 * span;
    let h_mid = f_from_field(theta, Complex64::from_polar(r, mid)).re;
    let lo = idx.len() / 4;
    let hi = idx.len() - lo;
    let max_h_core = profile[lo..hi].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let near = 1.0 - 1e-6;
    let signs: Vec<f64> = idx.iter().map(|&j| f_from_field(theta, Complex64::from_polar(near, theta.angle(j))).im).collect();
    let zero = signs
        .windows(2)
        .zip(idx.windows(2))
        .find(|(s, _)| s[0] > 0.0 && s[1] < 0.0)
        .map(|(_, j)| 0.5 * (theta.angle(j[0]) + theta.angle(j[0]) + theta.spacing()));
    Ok(TangentialReport { radius: r, profile, h_mid, max_h_core, zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::field::FieldKind;

    #[test]
    fn semicircle_density_vanishes_on_arc() {
        let th = BoundaryField::semicircle_split(2048).unwrap();
        let rep = tangential_arc_check(&th, 0.0, PI, &Tolerances::default()).unwrap();
        let r: f64 = 0.999;
        let exact = (1.0 - r * r) / ((1.0 - Complex64::new(0.0, r)).norm_sqr() * PI);
        assert!((rep.h_mid - exact).abs() < 1e-5, "{} vs {exact}", rep.h_mid);
        assert!(rep.h_mid < 5e-3);
        assert!(rep.zero.is_none());
    }

    #[test]
    fn split_arc_has_one_zero() {
        let n = 2048;
        let th = BoundaryField::from_fn(FieldKind::Angle, n, |t| {
            if t > 0.5 && t < 2.0 {
                -FRAC_PI_2
            } else if t > 2.0 && t < 3.5 {
                FRAC_PI_2
            } else {
                0.0
            }
        })
        .unwrap();
        let rep = tangential_arc_check(&th, 0.5, 3.5, &Tolerances::default()).unwrap();
        let z = rep.zero.expect("zero");
        assert!((z - 2.0).abs() <= th.spacing(), "{z}");
    }

    #[test]
    fn smooth_field_is_not_tangential() {
        let th = BoundaryField::from_fn(FieldKind::Angle, 256, |t| 0.3 * t.sin()).unwrap();
        assert!(matches!(tangential_arc_check(&th, 0.0, 1.0, &Tolerances::default()), Err(Error::ArcNotTangential(_))));
        assert!(matches!(tangential_arc_check(&th, 0.0, 0.05, &Tolerances::default()), Err(Error::ArcTooShort(_))));
    }
}

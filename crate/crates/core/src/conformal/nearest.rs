//! Reflection angles on an inner curve from the nearest boundary point of an outer one.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn cross(a: Complex64, b: Complex64) -> f64 {
    (a.conj() * b).im
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(p2 - p1, q1 - p1);
    let d2 = cross(p2 - p1, q2 - p1);
    let d3 = cross(q2 - q1, p1 - q1);
    let d4 = cross(q2 - q1, p2 - q1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Error if two non-adjacent edges of the closed polyline cross.
pub fn check_simple(poly: &[Complex64]) -> Result<()> {
    let n = poly.len();
    if n < 3 {
        return Err(Error::InvalidBoundary(format!("polyline has {n} vertices")));
    }
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]) {
                return Err(Error::InvalidBoundary(format!("edges {i} and {j} intersect")));
            }
        }
    }
    Ok(())
}

/// For every inner sample, the angle at the nearest point of the outer polyline.
///
/// `theta` holds values at the outer vertices and is interpolated linearly
/// along edges. Ties go to the smallest boundary parameter.
pub fn nearest_point_angles(outer: &[Complex64], theta: &[f64], inner: &[Complex64]) -> Result<Vec<f64>> {
    if theta.len() != outer.len() {
        return Err(Error::InvalidInput(format!("{} angles for {} vertices", theta.len(), outer.len())));
    }
    check_simple(outer)?;
    let n = outer.len();
    Ok(inner
        .iter()
        .map(|&x| {
            let mut best = (f64::INFINITY, 0.0);
            for i in 0..n {
                let (a, b) = (outer[i], outer[(i + 1) % n]);
                let e = b - a;
                let s = ((x - a).conj() * e).re / e.norm_sqr();
                let s = s.clamp(0.0, 1.0);
                let d = (a + e * s - x).norm();
                if d < best.0 - 1e-14 {
                    best = (d, theta[i] * (1.0 - s) + theta[(i + 1) % n] * s);
                }
            }
            best.1
        })
        .collect())
}

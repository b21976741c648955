//! Continuous arguments of paths, truncated windings and rotation rates.


use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::path::DiskPath;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::harmonic::BoundaryField;
use crate::stats::{batch_means, KahanSum};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingSeries {
    pub times: Vec<f64>,
    pub arg_values: Vec<f64>,
    /// `(excursion start index, removed increment)`.
    pub removed: Vec<(usize, f64)>,
}

/// Increment of `arg(w - z)` as `w` moves straight from `a` to `b`.
fn segment_increment(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    ((b - z) / (a - z)).arg()
}

/// Continuous argument of `X - z` along the path.
pub fn winding(path: &DiskPath, z: Complex64) -> Result<WindingSeries> {
    let n = path.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty path".into()));
    }
    if let Some(i) = path.positions.iter().position(|p| *p == z) {
        return Err(Error::PointOnPath { index: i });
    }
    let mut jumps = path.jumps.iter().peekable();
    let mut arg = Vec::with_capacity(n);
    arg.push((path.positions[0] - z).arg());
    for i in 1..n {
        let (a, b) = (path.positions[i - 1], path.positions[i]);
        let mut inc = None;
        while let Some(j) = jumps.peek() {
            if j.index < i {
                jumps.next();
            } else {
                if j.index == i {
                    // Follow the recorded boundary arc.
                    let mut pts = vec![a];
                    let pieces = ((j.arc_length().abs() / 0.01).ceil() as usize).max(2);
                    pts.extend(j.fill(pieces));
                    pts.push(b);
                    inc = Some(pts.windows(2).map(|w| segment_increment(w[0], w[1], z)).sum::<f64>());
                }
                break;
            }
        }
        let d = inc.unwrap_or_else(|| segment_increment(a, b, z));
        arg.push(arg[i - 1] + d);
    }
    let times = (0..n).map(|i| path.time(i)).collect();
    Ok(WindingSeries { times, arg_values: arg, removed: Vec::new() })
}

/// Boundary-to-boundary excursions `(start, end)` of a path, as sample indices.
pub fn excursions(path: &DiskPath, tol: &Tolerances) -> Vec<(usize, usize)> {
    let on = |z: &Complex64| z.norm() > 1.0 - tol.boundary_visit;
    let mut out = Vec::new();
    let mut last_boundary: Option<usize> = None;
    for (i, z) in path.positions.iter().enumerate() {
        if on(z) {
            if let Some(s) = last_boundary {
                if i - s >= 2 {
                    out.push((s, i));
                }
            }
            last_boundary = Some(i);
        }
    }
    out
}

/// Remove the endpoint gap of every completed excursion winding more than `threshold`.
pub fn winding_star(ws: &WindingSeries, excursions: &[(usize, usize)], threshold: f64) -> WindingSeries {
    let mut arg = ws.arg_values.clone();
    let mut removed = Vec::new();
    let mut shift = 0.0;
    let mut cursor = 0;
    let mut sorted = excursions.to_vec();
    sorted.sort_unstable();
    for &(s, e) in &sorted {
        let gap = ws.arg_values[e] - ws.arg_values[s];
        if gap.abs() > threshold {
            for v in &mut arg[cursor..e] {
                *v -= shift;
            }
            cursor = e;
            shift += gap;
            removed.push((s, gap));
        }
    }
    for v in &mut arg[cursor..] {
        *v -= shift;
    }
    WindingSeries { times: ws.times.clone(), arg_values: arg, removed }
}

/// Rotation-rate estimate with its batch-means standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationEstimate {
    pub rate: f64,
    pub std_error: f64,
    pub removed_excursions: usize,
}

/// `(arg*(X_T - z) - arg*(X_0 - z)) / T` after burn-in, with batch means.
pub fn rotation_rate(path: &DiskPath, z: Complex64, tol: &Tolerances) -> Result<RotationEstimate> {
    let ws = winding(path, z)?;
    let exc = excursions(path, tol);
    let star = winding_star(&ws, &exc, tol.winding_threshold);
    let n = path.len();
    let start = (n as f64 * tol.burn_in) as usize;
    let b = tol.batches;
    let len = (n - 1 - start) / b;
    if len == 0 {
        return Err(Error::InvalidInput("path too short for batch means".into()));
    }
    let rates: Vec<f64> = (0..b)
        .map(|k| {
            let i0 = start + k * len;
            (star.arg_values[i0 + len] - star.arg_values[i0]) / (len as f64 * path.dt)
        })
        .collect();
    let (rate, std_error) = batch_means(&rates, b);
    Ok(RotationEstimate { rate, std_error, removed_excursions: star.removed.len() })
}

/// `int g(X) dL` along the path divided by its horizon.
pub fn local_time_rate(path: &DiskPath, g: &BoundaryField) -> f64 {
    let mut acc = KahanSum::new();
    for i in 1..path.len() {
        let dl = path.local_time[i] - path.local_time[i - 1];
        if dl > 0.0 {
            acc.add(g.linear(path.positions[i].arg()) * dl);
        }
    }
    if path.horizon() > 0.0 {
        acc.value() / path.horizon()
    } else {
        0.0
    }
}

/// Winding number of a closed polygon about `z` by crossing counts.
pub fn crossing_winding_number(poly: &[Complex64], z: Complex64) -> i64 {
    let mut w = 0;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i] - z, poly[(i + 1) % n] - z);
        if a.im <= 0.0 {
            if b.im > 0.0 && a.re * b.im - b.re * a.im > 0.0 {
                w += 1;
            }
        } else if b.im <= 0.0 && a.re * b.im - b.re * a.im < 0.0 {
            w -= 1;
        }
    }
    w
}

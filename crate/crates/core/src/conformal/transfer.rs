//! Time change of disk paths through a conformal map.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::{Conformal, ConformalMap};
use crate::disk::{DiskPath, Histogram, Jump, PolarGrid};
use crate::error::{Error, Result};

/// `c(t) = int_0^t |f'(X_s)|^2 ds` on the source grid, by the trapezoid rule.
pub fn clock(path: &DiskPath, map: &dyn Conformal) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(path.len());
    let mut prev = None;
    let mut acc = 0.0;
    for z in &path.positions {
        let w = map.deriv(*z)?.norm_sqr();
        if !w.is_finite() {
            return Err(Error::MapDomainError(format!("derivative is not finite at {z}")));
        }
        if let Some(p) = prev {
            acc += 0.5 * path.dt * (p + w);
        }
        out.push(acc);
        prev = Some(w);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferredPath {
    pub source: DiskPath,
    pub map: ConformalMap,
    pub clock: Vec<f64>,
    /// Target grid step.
    pub dt: f64,
    /// `Y_t` on the target grid.
    pub resampled: Vec<Complex64>,
    /// `X_{c^{-1}(t)}` on the target grid.
    pub preimages: Vec<Complex64>,
    /// Source jumps moved to the target grid, with the arc still in disk coordinates.
    pub jumps: Vec<Jump>,
}

impl TransferredPath {
    pub fn horizon(&self) -> f64 {
        self.dt * self.resampled.len().saturating_sub(1) as f64
    }

    /// Target path as a sampled path, for distances and serialization.
    pub fn as_path(&self) -> DiskPath {
        let mut p = DiskPath::from_positions(self.dt, self.resampled.clone());
        p.seed = self.source.seed;
        p
    }

    /// Occupation binned by preimage cells in the disk.
    pub fn preimage_occupation(&self, grid: PolarGrid, burn_in: f64) -> Histogram {
        let mut h = Histogram::new(grid);
        let start = (self.preimages.len() as f64 * burn_in) as usize;
        for z in &self.preimages[start..] {
            h.add(*z, 1.0);
        }
        h
    }
}

/// `Y_t = f(X_{c^{-1}(t)})` on a uniform grid of step `target_dt`.
///
/// The source position is linearly interpolated in source time between the
/// samples bracketing `c^{-1}(t)`.
pub fn transfer(path: &DiskPath, map: &ConformalMap, target_dt: f64) -> Result<TransferredPath> {
    if !(target_dt > 0.0) {
        return Err(Error::InvalidStep(target_dt, f64::INFINITY));
    }
    let c = clock(path, map)?;
    let total = *c.last().ok_or_else(|| Error::InvalidInput("empty path".into()))?;
    if path.len() > 1 && !(total > 0.0 && total.is_finite()) {
        return Err(Error::DegenerateClock);
    }
    let n = (total / target_dt + 1e-9).floor() as usize;
    let mut preimages = Vec::with_capacity(n + 1);
    let mut resampled = Vec::with_capacity(n + 1);
    let mut index_of = Vec::with_capacity(n + 1);
    let mut i = 0;
    for k in 0..=n {
        let t = k as f64 * target_dt;
        while i + 1 < c.len() && c[i + 1] < t {
            i += 1;
        }
        let x = if i + 1 < c.len() {
            let w = ((t - c[i]) / (c[i + 1] - c[i])).clamp(0.0, 1.0);
            let x = path.positions[i] + (path.positions[i + 1] - path.positions[i]) * w;
            if x.norm() > 1.0 {
                x / x.norm()
            } else {
                x
            }
        } else {
            path.positions[i]
        };
        preimages.push(x);
        resampled.push(map.eval(x)?);
        index_of.push(i);
    }
    let jumps = path
        .jumps
        .iter()
        .filter_map(|j| {
            let k = index_of.partition_point(|&i| i + 1 < j.index);
            (k <= n).then_some(Jump { index: k.max(1), ..*j })
        })
        .collect();
    Ok(TransferredPath { source: path.clone(), map: map.clone(), clock: c, dt: target_dt, resampled, preimages, jumps })
}

/// Cell masses of the pushed stationary law, in preimage coordinates: `h |f'|^2` normalized.
pub fn pushed_masses(grid: PolarGrid, map: &ConformalMap, h: impl Fn(Complex64) -> f64) -> Vec<f64> {
    grid.masses(|z| h(z) * map.deriv(z).map(|d| d.norm_sqr()).unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn circle_path(n: usize, dt: f64) -> DiskPath {
        DiskPath::from_positions(dt, (0..=n).map(|k| Complex64::from_polar(0.5, TAU * k as f64 / n as f64)).collect())
    }

    #[test]
    fn identity_and_dilation_clocks() {
        let p = circle_path(100, 0.01);
        let id = clock(&p, &ConformalMap::identity()).unwrap();
        assert!(id.iter().enumerate().all(|(i, c)| (c - 0.01 * i as f64).abs() < 1e-12));
        let two = ConformalMap::Polynomial { coefficients: vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)] };
        let c2 = clock(&p, &two).unwrap();
        assert!(c2.iter().enumerate().all(|(i, c)| (c - 0.04 * i as f64).abs() < 1e-12));
    }

    #[test]
    fn clock_is_additive() {
        let p = circle_path(200, 0.01);
        let m = ConformalMap::mobius(Complex64::new(0.3, 0.2), 0.0).unwrap();
        let c = clock(&p, &m).unwrap();
        let sub = DiskPath::from_positions(0.01, p.positions[50..].to_vec());
        let cs = clock(&sub, &m).unwrap();
        for (k, v) in cs.iter().enumerate() {
            assert!((c[50 + k] - c[50] - v).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_transfer_reproduces_the_source() {
        let p = circle_path(100, 0.01);
        let t = transfer(&p, &ConformalMap::identity(), 0.01).unwrap();
        assert_eq!(t.resampled.len(), p.len());
        let speed = 0.5 * TAU;
        for (a, b) in t.resampled.iter().zip(&p.positions) {
            assert!((a - b).norm() <= 0.01 * speed);
        }
    }

    #[test]
    fn mobius_round_trip() {
        let p = circle_path(400, 0.005);
        let m = ConformalMap::mobius(Complex64::new(0.4, 0.0), 0.5).unwrap();
        let inv = ConformalMap::Mobius { w0: Complex64::new(-0.4, 0.0) * Complex64::from_polar(1.0, 0.5), rot: -0.5 };
        let y = transfer(&p, &m, 0.005).unwrap();
        let back = transfer(&y.as_path(), &inv, 0.005).unwrap();
        let dmax = |f: &ConformalMap| (0..64).map(|j| f.deriv(Complex64::from_polar(0.5, TAU * j as f64 / 64.0)).unwrap().norm()).fold(0.0, f64::max);
        let bound = 2.0 * 0.005 * dmax(&m) * dmax(&inv) * 0.5 * TAU;
        let n = back.resampled.len().min(p.len());
        for k in 0..n {
            assert!((back.resampled[k] - p.positions[k]).norm() <= bound, "k={k}");
        }
    }

    #[test]
    fn clock_plateau_is_degenerate() {
        let p = DiskPath::from_positions(0.01, vec![Complex64::new(0.0, 0.0); 10]);
        let zero = ConformalMap::Polynomial { coefficients: vec![Complex64::new(0.0, 0.0); 2] };
        assert!(matches!(transfer(&p, &zero, 0.01), Err(Error::DegenerateClock)));
    }
}

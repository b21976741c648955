//! Gluing excursions along boundary local time.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::excursion::{check_scales, killed_walk, Excursion, GridRecorder};
use crate::config::Tolerances;
use crate::disk::{Histogram, PolarGrid};
use crate::error::{Error, Result};
use crate::harmonic::{poisson_extend, BoundaryField};
use crate::rng;
use crate::stats::KahanSum;

/// Starting distance of every trial excursion.
pub const DEFAULT_DELTA: f64 = 1e-3;
pub const DEFAULT_EPS_DEP: f64 = 0.25;

/// Inverse-CDF sampler for root angles drawn from `nu / |nu|`.
#[derive(Clone, Debug)]
pub struct RootSampler {
    cdf: Vec<f64>,
    spacing: f64,
}

impl RootSampler {
    pub fn new(nu: &BoundaryField) -> Result<Self> {
        let v = nu.values();
        if let Some(x) = v.iter().find(|x| **x < 0.0) {
            return Err(Error::InvalidMeasure(format!("negative density {x}")));
        }
        let mut cdf = Vec::with_capacity(v.len());
        let mut acc = 0.0;
        for x in v {
            acc += x;
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::InvalidMeasure("measure has no mass".into()));
        }
        for c in &mut cdf {
            *c /= acc;
        }
        Ok(RootSampler { cdf, spacing: nu.spacing() })
    }

    /// Cell `j` covers `[(j - 1/2) dt, (j + 1/2) dt)` around grid angle `j dt`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let j = self.cdf.partition_point(|c| *c < u).min(self.cdf.len() - 1);
        ((j as f64 - 0.5 + rng.gen::<f64>()) * self.spacing).rem_euclid(TAU)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErbmPath {
    pub dt: f64,
    pub seed: u64,
    pub delta: f64,
    pub eps_dep: f64,
    /// Deep excursions keyed by the local time at which they start.
    pub excursions: Vec<(f64, Excursion)>,
    /// Positions on the `dt` grid; the boundary state takes no time, so no sample lands on it.
    pub assembled: Vec<Complex64>,
    /// Index of the first assembled sample of each deep excursion.
    pub gaps: Vec<usize>,
    pub trials: u64,
    pub local_time: f64,
    pub total_time: f64,
    pub shallow_time: f64,
    pub deep_time: f64,
}

impl ErbmPath {
    pub fn occupation(&self, grid: PolarGrid) -> Histogram {
        let mut h = Histogram::new(grid);
        for z in &self.assembled {
            h.add(*z, 1.0);
        }
        h
    }
}

/// Assemble ERBM on `[0, horizon]` with excursion roots drawn from `nu`.
///
/// Every trial walk from distance `delta` contributes local time
/// `-log(1 - delta)`, which makes the rate of deep excursions exactly
/// `1 / |log(1 - eps_dep)|` per unit local time. Shallow trials are run too so
/// that their time and occupation are accounted for, but only deep ones are
/// stored as excursions.
pub fn assemble_erbm(nu: &BoundaryField, eps_dep: f64, horizon: f64, dt: f64, seed: u64, delta: f64) -> Result<ErbmPath> {
    check_scales(delta, eps_dep)?;
    if !(dt > 0.0 && horizon >= 0.0) {
        return Err(Error::InvalidStep(dt, horizon));
    }
    let roots = RootSampler::new(nu)?;
    let mut rng = rng::stream(seed, 0);
    let mut path = ErbmPath {
        dt,
        seed,
        delta,
        eps_dep,
        excursions: Vec::new(),
        assembled: Vec::new(),
        gaps: Vec::new(),
        trials: 0,
        local_time: 0.0,
        total_time: 0.0,
        shallow_time: 0.0,
        deep_time: 0.0,
    };
    if horizon == 0.0 {
        return Ok(path);
    }
    let dl = -(1.0 - delta).ln();
    let mut clock = KahanSum::new();
    let mut shallow = KahanSum::new();
    let mut deep = KahanSum::new();
    let total_samples = (horizon / dt).floor() as usize;
    while path.assembled.len() < total_samples {
        let alpha = roots.sample(&mut rng);
        let root = Complex64::from_polar(1.0, alpha);
        let mut rec = GridRecorder::new(dt, clock.value());
        let start = path.assembled.len();
        let out = killed_walk(root * (1.0 - delta), eps_dep, dt, &mut rng, |s, z| rec.visit(s, z));
        path.trials += 1;
        let lt = path.local_time;
        path.local_time += dl;
        clock.add(out.lifetime);
        path.assembled.extend_from_slice(&rec.points);
        if out.deep {
            deep.add(out.lifetime);
            path.gaps.push(start);
            let mut points = vec![root];
            points.extend_from_slice(&rec.points);
            points.push(out.terminal);
            let exc = Excursion { root_angle: alpha, dt, points, depth: 1.0 - out.min_radius, lifetime: out.lifetime };
            path.excursions.push((lt, exc));
        } else {
            shallow.add(out.lifetime);
        }
    }
    path.assembled.truncate(total_samples);
    path.total_time = clock.value();
    path.shallow_time = shallow.value();
    path.deep_time = deep.value();
    Ok(path)
}

/// Cell masses of the density proportional to `int K_x(z) nu(dx)`.
pub fn predicted_masses(nu: &BoundaryField, grid: PolarGrid, tol: &Tolerances) -> Vec<f64> {
    let u = poisson_extend(nu, tol);
    grid.masses(|z| u.eval(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::FieldKind;
    use crate::stats::chi_square;

    #[test]
    fn zero_measure_is_rejected() {
        let nu = BoundaryField::constant(FieldKind::Density, 64, 0.0).unwrap();
        assert!(matches!(assemble_erbm(&nu, 0.25, 1.0, 1e-3, 1, 1e-3), Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn zero_horizon_is_empty() {
        let nu = BoundaryField::constant(FieldKind::Density, 64, 1.0).unwrap();
        let p = assemble_erbm(&nu, 0.25, 0.0, 1e-3, 1, 1e-3).unwrap();
        assert!(p.assembled.is_empty() && p.excursions.is_empty());
    }

    #[test]
    fn bookkeeping_and_root_law() {
        let nu = BoundaryField::constant(FieldKind::Density, 64, 1.0).unwrap();
        let p = assemble_erbm(&nu, 0.25, 20.0, 1e-3, 2, 1e-2).unwrap();
        assert!((p.total_time - p.shallow_time - p.deep_time).abs() < 1e-9 * p.total_time);
        assert!(p.total_time >= 20.0);
        assert_eq!(p.assembled.len(), 20_000);
        assert!(p.excursions.windows(2).all(|w| w[1].0 > w[0].0));
        assert!(p.assembled.iter().all(|z| z.norm() <= 1.0));
        let bins = 8;
        let mut counts = vec![0u64; bins];
        for (_, e) in &p.excursions {
            counts[((e.root_angle / TAU * bins as f64) as usize).min(bins - 1)] += 1;
        }
        assert!(chi_square(&counts, &vec![1.0 / bins as f64; bins]).p_value > 0.001);
    }

    #[test]
    fn rescaled_measure_gives_the_same_path() {
        let nu = BoundaryField::from_fn(FieldKind::Density, 64, |t| 1.0 + 0.5 * t.cos()).unwrap();
        let nu2 = BoundaryField::from_fn(FieldKind::Density, 64, |t| 2.0 * (1.0 + 0.5 * t.cos())).unwrap();
        let a = assemble_erbm(&nu, 0.25, 2.0, 1e-3, 5, 1e-2).unwrap();
        let b = assemble_erbm(&nu2, 0.25, 2.0, 1e-3, 5, 1e-2).unwrap();
        assert_eq!(a.assembled, b.assembled);
    }

    #[test]
    fn uniform_prediction_is_flat() {
        let nu = BoundaryField::constant(FieldKind::Density, 64, 1.0).unwrap();
        let m = predicted_masses(&nu, PolarGrid::default(), &Tolerances::default());
        assert!(m.iter().all(|x| (x - 1.0 / 128.0).abs() < 1e-12));
    }
}

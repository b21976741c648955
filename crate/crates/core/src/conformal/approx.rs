//! Approximation of a domain by images of smaller disks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::ConformalMap;
use super::transfer::transfer;
use crate::config::Tolerances;
use crate::disk::{m1_distance, replicas, simulate, DiskPath};
use crate::error::Result;
use crate::harmonic::{hmu_to_theta, poisson_extend, BoundaryField, FieldKind, HarmonicPair};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxBudget {
    pub runs: usize,
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
    pub n_grid: usize,
}

impl Default for ApproxBudget {
    fn default() -> Self {
        ApproxBudget { runs: 100, horizon: 1.0, dt: 1e-3, seed: 1, n_grid: 1024 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxRow {
    pub r: f64,
    pub median_m1: f64,
    pub distances: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub rows: Vec<ApproxRow>,
    pub non_increasing: bool,
    pub seed: u64,
}

/// Pair of the process on `B(0, r)` pulled back to the unit disk: `h(r z)` with the same rotation.
pub fn dilated_pair(p: &HarmonicPair, r: f64, n_grid: usize, tol: &Tolerances) -> Result<HarmonicPair> {
    if r == 1.0 {
        return Ok(p.clone());
    }
    let field = BoundaryField::from_fn(FieldKind::Density, n_grid, |t| p.h(Complex64::from_polar(r, t)))?;
    Ok(HarmonicPair { h: poisson_extend(&field, tol), mu0: p.mu0 })
}

fn truncate(p: &DiskPath, n: usize) -> DiskPath {
    let mut q = DiskPath::from_positions(p.dt, p.positions[..n].to_vec());
    q.seed = p.seed;
    q
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// M1 distance between `Y^k = f_k(X^k)` on `f(B(0, r_k))` and `Y = f(X)`, with paired seeds.
pub fn domain_approx_sequence(map: &ConformalMap, r_list: &[f64], p: &HarmonicPair, budget: &ApproxBudget, tol: &Tolerances) -> Result<ApproxReport> {
    let theta = hmu_to_theta(p, budget.n_grid, tol)?;
    let mut thetas = Vec::with_capacity(r_list.len());
    let mut maps = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let pr = dilated_pair(p, r, budget.n_grid, tol)?;
        thetas.push(if r == 1.0 { theta.clone() } else { hmu_to_theta(&pr, budget.n_grid, tol)? });
        maps.push(ConformalMap::scaled(map.clone(), r)?);
    }
    let x0 = Complex64::new(0.0, 0.0);
    let per_run: Vec<Result<Vec<f64>>> = replicas(budget.runs, |j| {
        let seed = budget.seed.wrapping_add(j as u64);
        let x = simulate(&theta, x0, budget.dt, budget.horizon, seed, tol)?;
        let y = transfer(&x, map, budget.dt)?.as_path();
        thetas
            .iter()
            .zip(&maps)
            .map(|(th, m)| {
                let xk = simulate(th, x0, budget.dt, budget.horizon, seed, tol)?;
                let yk = transfer(&xk, m, budget.dt)?.as_path();
                let n = y.len().min(yk.len());
                m1_distance(&truncate(&yk, n), &truncate(&y, n), budget.dt * (n - 1) as f64)
            })
            .collect()
    });
    let mut columns = vec![Vec::with_capacity(budget.runs); r_list.len()];
    for run in per_run {
        for (c, d) in columns.iter_mut().zip(run?) {
            c.push(d);
        }
    }
    let rows: Vec<ApproxRow> = r_list.iter().zip(columns).map(|(&r, distances)| ApproxRow { r, median_m1: median(&distances), distances }).collect();
    let non_increasing = rows.windows(2).all(|w| w[1].median_m1 <= w[0].median_m1);
    Ok(ApproxReport { rows, non_increasing, seed: budget.seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_radius_reproduces_the_target_process() {
        let tol = Tolerances::default();
        let map = ConformalMap::mobius(Complex64::new(0.4, 0.0), 0.0).unwrap();
        let p = HarmonicPair::uniform(0.2f64.tan());
        let budget = ApproxBudget { runs: 3, horizon: 0.2, ..Default::default() };
        let rep = domain_approx_sequence(&map, &[0.5, 1.0], &p, &budget, &tol).unwrap();
        assert!(rep.rows[1].distances.iter().all(|d| *d == 0.0));
        assert!(rep.rows[0].median_m1 > 0.0);
    }

    #[test]
    fn dilated_pair_keeps_normalization() {
        let tol = Tolerances::default();
        let th = BoundaryField::from_fn(FieldKind::Angle, 512, |t| 0.4 * t.cos()).unwrap();
        let p = crate::harmonic::theta_to_hmu(&th, &tol).unwrap();
        let q = dilated_pair(&p, 0.9, 512, &tol).unwrap();
        assert!((std::f64::consts::PI * q.h(Complex64::new(0.0, 0.0)) - 1.0).abs() < 1e-9);
        let z = Complex64::new(0.3, 0.4);
        assert!((q.h(z) - p.h(z * 0.9)).abs() < 1e-9);
    }
}

//! Invariance of the reflected process under disk automorphisms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::ConformalMap;
use super::transfer::transfer;
use crate::config::Tolerances;
use crate::disk::{occupation_density, rotation_rate, simulate, Histogram, PolarGrid, RotationEstimate};
use crate::error::Result;
use crate::harmonic::mobius::{compose_field, transfer_pair};
use crate::harmonic::{theta_to_hmu, BoundaryField, Mobius};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimBudget {
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
    pub grid: PolarGrid,
}

impl Default for SimBudget {
    fn default() -> Self {
        SimBudget { horizon: 2000.0, dt: 1e-3, seed: 1, grid: PolarGrid::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationComparison {
    pub z: Complex64,
    pub transferred: RotationEstimate,
    pub direct: RotationEstimate,
    pub within_3_sigma: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfMapReport {
    /// L1 distance between the occupation of the transferred and the directly simulated paths.
    pub density_gap: f64,
    pub transferred_l1: f64,
    pub direct_l1: f64,
    /// Largest gap between the transferred pair and the pair computed from the composed angle.
    pub h_gap: f64,
    pub mu0_gap: f64,
    pub rotations: Vec<RotationComparison>,
    pub seed: u64,
}

/// Points at which rotation rates are compared.
pub const ROTATION_POINTS: [(f64, f64); 5] = [(0.0, 0.0), (0.3, 0.0), (-0.3, 0.2), (0.1, -0.5), (0.0, 0.6)];

/// Simulate under `theta`, push through the automorphism, and compare with a
/// direct simulation under `theta o phi^{-1}`.
pub fn mobius_selfmap_check(theta: &BoundaryField, w0: Complex64, rot: f64, budget: &SimBudget, tol: &Tolerances) -> Result<SelfMapReport> {
    let phi = Mobius::new(w0, rot)?;
    let map = ConformalMap::mobius(w0, rot)?;
    let inv = phi.inverse();
    let p = theta_to_hmu(theta, tol)?;
    let predicted = transfer_pair(&p, &inv, theta.n_grid(), tol);
    let pushed_theta = compose_field(theta, &inv)?;
    let direct_pair = theta_to_hmu(&pushed_theta, tol)?;

    let mut h_gap: f64 = 0.0;
    for k in 0..8 {
        for j in 0..16 {
            let z = Complex64::from_polar(0.95 * k as f64 / 8.0, std::f64::consts::TAU * j as f64 / 16.0);
            h_gap = h_gap.max((predicted.h(z) - direct_pair.h(z)).abs());
        }
    }
    let mu0_gap = (predicted.mu0 - direct_pair.mu0).abs();

    let x = simulate(theta, Complex64::new(0.0, 0.0), budget.dt, budget.horizon, budget.seed, tol)?;
    let y = transfer(&x, &map, budget.dt)?.as_path();
    // Both processes start at the image of the origin, away from the winding centres.
    let xd = simulate(&pushed_theta, y.at_time(0.0), budget.dt, y.horizon(), budget.seed.wrapping_add(1), tol)?;
    let hy = occupation_density(&y, budget.grid, tol.burn_in)?;
    let hd = occupation_density(&xd, budget.grid, tol.burn_in)?;
    let masses = budget.grid.masses(|z| predicted.h(z));
    let gap = |a: &Histogram, b: &Histogram| a.masses().iter().zip(b.masses()).map(|(u, v)| (u - v).abs()).sum::<f64>();

    let mut rotations = Vec::new();
    for (re, im) in ROTATION_POINTS {
        let z = Complex64::new(re, im);
        let a = rotation_rate(&y, z, tol)?;
        let b = rotation_rate(&xd, z, tol)?;
        let sigma = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        rotations.push(RotationComparison { z, transferred: a, direct: b, within_3_sigma: (a.rate - b.rate).abs() <= 3.0 * sigma });
    }
    Ok(SelfMapReport {
        density_gap: gap(&hy, &hd),
        transferred_l1: hy.l1_error(&masses),
        direct_l1: hd.l1_error(&masses),
        h_gap,
        mu0_gap,
        rotations,
        seed: budget.seed,
    })
}

//! Roots of deep excursions of the reflected process as the rotation grows.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::flow::BoundaryDensity;
use crate::config::Tolerances;
use crate::disk::{replicas, ReflectionScheme, Stepper};
use crate::error::{Error, Result};
use crate::harmonic::{hmu_to_theta, poisson_extend, BoundaryField, FieldKind, HarmonicPair};
use crate::rng;
use crate::stats::chi_square;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentialOptions {
    pub replicas: usize,
    /// Deep-excursion roots recorded per replica.
    pub roots_per_replica: usize,
    pub bins: usize,
    pub dt: f64,
    /// Abandon a replica after this much time.
    pub max_time: f64,
}

impl Default for TangentialOptions {
    fn default() -> Self {
        TangentialOptions { replicas: 2000, roots_per_replica: 4, bins: 16, dt: 1e-3, max_time: 200.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentialRun {
    pub mu0: f64,
    pub max_angle: f64,
    pub boundary_mass: f64,
    pub roots: usize,
    pub chi_square: f64,
    pub p_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentialReport {
    pub runs: Vec<TangentialRun>,
    /// Whether the chi-square statistic decreases strictly along the runs.
    pub decreasing: bool,
    pub seed: u64,
}

/// Pair `(h, mu0)` from boundary values of `h`, rescaled so that `pi h(0) = 1`.
pub fn pair_from_boundary(h: &BoundaryField, mu0: f64, tol: &Tolerances) -> Result<HarmonicPair> {
    let min = h.values().iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 1e-6) {
        return Err(Error::ViolatesLipschitzCondition(min));
    }
    let scale = 1.0 / (PI * h.mean());
    let v: Vec<f64> = h.values().iter().map(|x| x * scale).collect();
    let field = BoundaryField::new(FieldKind::Density, v)?;
    Ok(HarmonicPair { h: poisson_extend(&field, tol), mu0 })
}

/// Simulate from the boundary point 1 and return the first `n` deep-excursion roots.
pub fn deep_roots(theta: &BoundaryField, eps_dep: f64, n: usize, opts: &TangentialOptions, seed: u64, stream: u64, tol: &Tolerances) -> Result<Vec<f64>> {
    let mut st = Stepper::new(theta, Complex64::new(1.0, 0.0), opts.dt, rng::stream(seed, stream), ReflectionScheme::Polar, tol)?;
    let level = 1.0 - eps_dep;
    let mut root = 0.0;
    let mut armed = true;
    let mut out = Vec::with_capacity(n);
    let steps = (opts.max_time / opts.dt) as usize;
    for _ in 0..steps {
        if st.step()? > 0.0 {
            root = st.position().arg();
            armed = true;
        } else if armed && st.position().norm() <= level {
            out.push(root.rem_euclid(TAU));
            armed = false;
            if out.len() == n {
                break;
            }
        }
    }
    Ok(out)
}

/// Chi-square distance of deep-excursion roots to `nu / 2` for each `mu0`.
pub fn tangential_limit_experiment(h: &BoundaryField, mu0_list: &[f64], eps_dep: f64, opts: &TangentialOptions, seed: u64, tol: &Tolerances) -> Result<TangentialReport> {
    let mut runs = Vec::with_capacity(mu0_list.len());
    for &mu0 in mu0_list {
        let pair = pair_from_boundary(h, mu0, tol)?;
        let theta = hmu_to_theta(&pair, h.n_grid(), tol)?;
        let hb = BoundaryField::from_fn(FieldKind::Density, h.n_grid(), |t| pair.h.eval(Complex64::from_polar(1.0, t)))?;
        let density = BoundaryDensity::new(&hb)?;
        let boundary_mass = density.arc_mass(0.0, TAU);
        let probs: Vec<f64> = (0..opts.bins)
            .map(|b| density.arc_mass(TAU * b as f64 / opts.bins as f64, TAU * (b + 1) as f64 / opts.bins as f64) / boundary_mass)
            .collect();
        // Surface precondition errors before the parallel run.
        Stepper::new(&theta, Complex64::new(1.0, 0.0), opts.dt, rng::stream(seed, 0), ReflectionScheme::Polar, tol)?;
        let roots: Vec<Vec<f64>> = replicas(opts.replicas, |k| deep_roots(&theta, eps_dep, opts.roots_per_replica, opts, seed, k as u64, tol).unwrap_or_default());
        let mut counts = vec![0u64; opts.bins];
        let mut total = 0;
        for r in roots.iter().flatten() {
            counts[((r / TAU * opts.bins as f64) as usize).min(opts.bins - 1)] += 1;
            total += 1;
        }
        let chi = chi_square(&counts, &probs);
        runs.push(TangentialRun { mu0, max_angle: theta.sup_norm(), boundary_mass, roots: total, chi_square: chi.statistic, p_value: chi.p_value });
    }
    let decreasing = runs.windows(2).all(|w| w[1].chi_square < w[0].chi_square);
    Ok(TangentialReport { runs, decreasing, seed })
}

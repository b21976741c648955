//! Long-time law of the unwrapped angle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sim::replicas;
use super::strip::StripStepper;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::harmonic::{theta_to_hmu, BoundaryField};
use crate::rng;
use crate::stats::{cauchy_cdf, ks_one_sample};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyPoint {
    pub t: f64,
    pub ks: f64,
    pub p_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub mu0: f64,
    pub replicas: usize,
    pub points: Vec<CauchyPoint>,
    pub seed: u64,
}

/// Boundary step of the logarithmic scheme used by the limit test.
pub const CAUCHY_DS0: f64 = 1e-2;

/// Compare `arg(X_t) / t - mu0` against the standard Cauchy law for every `t`.
///
/// Replicas start at radius 1/2 on the positive axis.
pub fn cauchy_limit_test(theta: &BoundaryField, t_values: &[f64], count: usize, seed: u64, tol: &Tolerances) -> Result<CauchyReport> {
    if count < 2 || t_values.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidInput("need positive times and at least two replicas".into()));
    }
    let mu0 = theta_to_hmu(theta, tol)?.mu0;
    let mut times = t_values.to_vec();
    times.sort_by(f64::total_cmp);
    let x0 = Complex64::new(0.5f64.ln(), 0.0);
    // Probe once so that precondition errors surface before the parallel run.
    StripStepper::new(theta, x0, CAUCHY_DS0, rng::stream(seed, 0), tol)?;
    let runs: Vec<Vec<f64>> = replicas(count, |k| {
        let mut st = StripStepper::new(theta, x0, CAUCHY_DS0, rng::stream(seed, k as u64), tol).expect("checked above");
        times.iter().map(|&t| st.advance_to(t).im / t - mu0).collect()
    });
    let points = times
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let sample: Vec<f64> = runs.iter().map(|r| r[j]).collect();
            let ks = ks_one_sample(&sample, cauchy_cdf);
            CauchyPoint { t, ks: ks.statistic, p_value: ks.p_value }
        })
        .collect();
    Ok(CauchyReport { mu0, replicas: count, points, seed })
}

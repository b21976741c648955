//! Uniformly sampled functions on the unit circle.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Angle,
    Density,
    Generic,
}

/// Samples of a function on the circle at angles `2 pi j / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryField {
    kind: FieldKind,
    n_grid: usize,
    values: Vec<f64>,
}

/// Slack allowed when checking that angle samples lie in [-pi/2, pi/2].
const ANGLE_SLACK: f64 = 1e-12;

impl BoundaryField {
    pub fn new(kind: FieldKind, values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite sample at index {j}")));
        }
        let mut values = values;
        if kind == FieldKind::Angle {
            for (j, v) in values.iter_mut().enumerate() {
                if v.abs() > FRAC_PI_2 + ANGLE_SLACK {
                    return Err(Error::InvalidInput(format!("angle sample {v} at index {j} exceeds pi/2")));
                }
                *v = v.clamp(-FRAC_PI_2, FRAC_PI_2);
            }
        }
        Ok(BoundaryField { kind, n_grid: n, values })
    }

    /// Sample `f(t)` at the grid angles.
    pub fn from_fn(kind: FieldKind, n_grid: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..n_grid).map(|j| f(TAU * j as f64 / n_grid as f64)).collect();
        Self::new(kind, values)
    }

    pub fn constant(kind: FieldKind, n_grid: usize, c: f64) -> Result<Self> {
        Self::new(kind, vec![c; n_grid])
    }

    /// The field equal to -pi/2 on the open upper semicircle and +pi/2 on the open lower one.
    pub fn semicircle_split(n_grid: usize) -> Result<Self> {
        Self::split(n_grid, 0.0, PI, -FRAC_PI_2, FRAC_PI_2)
    }

    /// Angle field equal to `inside` on the open arc (t0, t1) and `outside` elsewhere;
    /// grid points exactly on an endpoint take the average.
    pub fn split(n_grid: usize, t0: f64, t1: f64, inside: f64, outside: f64) -> Result<Self> {
        let h = TAU / n_grid as f64;
        Self::from_fn(FieldKind::Angle, n_grid, |t| {
            let on = |a: f64| {
                let d = (t - a).rem_euclid(TAU);
                d < 1e-9 * h || TAU - d < 1e-9 * h
            };
            if on(t0) || on(t1) {
                0.5 * (inside + outside)
            } else if in_arc(t, t0, t1) {
                inside
            } else {
                outside
            }
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn n_grid(&self) -> usize {
        self.n_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn with_kind(mut self, kind: FieldKind) -> Result<Self> {
        if kind == FieldKind::Angle {
            return Self::new(kind, self.values);
        }
        self.kind = kind;
        Ok(self)
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_grid as f64
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n_grid as f64
    }

    pub fn mean(&self) -> f64 {
        crate::stats::mean(&self.values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Discrete Fourier coefficients `(1/n) sum_j v_j e^{-i k t_j}` for k = 0..n-1.
    pub fn fourier(&self) -> Vec<Complex64> {
        let n = self.n_grid;
        let mut buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Coefficient of e^{ikt} for |k| < n/2 from the output of `fourier`.
    pub fn coefficient(coeffs: &[Complex64], k: i64) -> Complex64 {
        let n = coeffs.len() as i64;
        coeffs[k.rem_euclid(n) as usize]
    }

    /// Trigonometric interpolant evaluated at angle `t`.
    pub fn interpolate(&self, coeffs: &[Complex64], t: f64) -> f64 {
        let n = self.n_grid as i64;
        let half = n / 2;
        let mut acc = coeffs[0].re;
        let w = Complex64::from_polar(1.0, t);
        let mut p = w;
        for k in 1..half {
            acc += 2.0 * (coeffs[k as usize] * p).re;
            p *= w;
        }
        acc + (coeffs[half as usize] * p).re
    }

    /// Piecewise-linear interpolation of the samples at angle `t`.
    pub fn linear(&self, t: f64) -> f64 {
        let n = self.n_grid;
        let x = t.rem_euclid(TAU) / self.spacing();
        let j = (x.floor() as usize).min(n - 1);
        let frac = x - j as f64;
        self.values[j] * (1.0 - frac) + self.values[(j + 1) % n] * frac
    }

    /// Analytic function `G` with `Re G` the Poisson extension of the samples and `Im G(0) = 0`,
    /// evaluated by exact integration of the piecewise-constant cell model.
    pub fn cauchy_transform(&self, z: Complex64) -> Complex64 {
        let n = self.n_grid;
        let h = self.spacing();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut prev = Complex64::from_polar(1.0, -0.5 * h) - z;
        for j in 0..n {
            let next = Complex64::from_polar(1.0, (j as f64 + 0.5) * h) - z;
            let ratio = next / prev;
            let mut darg = ratio.arg();
            if darg < 0.0 {
                darg += TAU;
            }
            let v = self.values[j];
            if v != 0.0 {
                acc += v * Complex64::new(2.0 * darg - h, -2.0 * ratio.norm().ln());
            }
            prev = next;
        }
        acc / TAU
    }
}

/// Whether angle `t` lies on the open counterclockwise arc from `t0` to `t1`.
pub fn in_arc(t: f64, t0: f64, t1: f64) -> bool {
    let span = (t1 - t0).rem_euclid(TAU);
    let d = (t - t0).rem_euclid(TAU);
    d > 0.0 && d < span
}

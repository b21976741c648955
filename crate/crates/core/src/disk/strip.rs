//! The process in logarithmic coordinates: reflected Brownian motion in the left
//! half-plane, mapped back to the disk through `exp` and a time change.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::path::DiskPath;
use super::sim::{check_angle, check_step, AngleLookup};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::harmonic::BoundaryField;
use crate::rng;

/// Streaming half-plane simulator with adaptive steps away from the boundary.
#[derive(Clone, Debug)]
pub struct StripStepper {
    lookup: AngleLookup,
    /// Real part (`<= 0`) and unwrapped angle.
    u: f64,
    v: f64,
    clock: f64,
    strip_time: f64,
    local: f64,
    ds0: f64,
    ds_max: f64,
    rng: ChaCha8Rng,
}

impl StripStepper {
    pub fn new(theta: &BoundaryField, x0: Complex64, ds0: f64, rng: ChaCha8Rng, tol: &Tolerances) -> Result<Self> {
        check_angle(theta, tol)?;
        check_step(ds0, tol)?;
        if x0.re > 1e-12 {
            return Err(Error::OutsideDomain);
        }
        Ok(StripStepper {
            lookup: AngleLookup::new(theta),
            u: x0.re.min(0.0),
            v: x0.im,
            clock: 0.0,
            strip_time: 0.0,
            local: 0.0,
            ds0,
            ds_max: f64::INFINITY,
            rng,
        })
    }

    /// Current half-plane position.
    pub fn position(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    /// Elapsed disk time `int |exp(X)|^2 ds`.
    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn strip_time(&self) -> f64 {
        self.strip_time
    }

    pub fn local_time(&self) -> f64 {
        self.local
    }

    /// One adaptive step; the step shrinks to `ds0` near the boundary.
    ///
    /// The normal coordinate is reflected exactly: with free endpoint `w` and
    /// bridge maximum `m`, the Skorokhod map gives `l = max(m, 0)` and `u = w - l`.
    pub fn step(&mut self) {
        let d = -self.u / 6.0;
        let ds = (d * d).clamp(self.ds0, self.ds_max);
        let s = ds.sqrt();
        let a: f64 = self.rng.sample(StandardNormal);
        let b: f64 = self.rng.sample(StandardNormal);
        let u_old = self.u;
        let w = self.u + s * a;
        let e: f64 = self.rng.sample(Exp1);
        let m = 0.5 * (u_old + w + ((w - u_old).powi(2) + 2.0 * ds * e).sqrt());
        let ell = m.max(0.0);
        let u = w - ell;
        let mut v = self.v + s * b;
        if ell > 0.0 {
            v = self.lookup.slide(v, ell);
            self.local += ell;
        }
        self.clock += 0.5 * ds * ((2.0 * u_old).exp() + (2.0 * u).exp());
        self.strip_time += ds;
        self.u = u;
        self.v = v;
    }

    /// Run until the disk clock reaches `t`; returns the linearly interpolated half-plane point.
    pub fn advance_to(&mut self, t: f64) -> Complex64 {
        let mut prev = (self.clock, self.position());
        while self.clock < t {
            prev = (self.clock, self.position());
            self.step();
        }
        let (c0, p0) = prev;
        if self.clock <= c0 {
            return self.position();
        }
        let w = ((t - c0) / (self.clock - c0)).clamp(0.0, 1.0);
        p0 + (self.position() - p0) * w
    }
}

/// Half-plane path with its clock, mapped to the disk on a uniform time grid.
#[derive(Clone, Debug)]
pub struct StripPath {
    pub half_plane: Vec<Complex64>,
    pub clock: Vec<f64>,
    pub disk: DiskPath,
}

/// Simulate in logarithmic coordinates from `x0` (in the closed left half-plane) up to disk time `horizon`.
pub fn simulate_strip(theta: &BoundaryField, x0: Complex64, dt: f64, horizon: f64, seed: u64, tol: &Tolerances) -> Result<StripPath> {
    let mut st = StripStepper::new(theta, x0, dt, rng::stream(seed, 0), tol)?;
    let steps = (horizon / dt).round() as usize;
    let mut half_plane = vec![st.position()];
    let mut clock = vec![0.0];
    let mut disk = vec![x0.exp()];
    let mut local = vec![0.0];
    for i in 1..=steps {
        let target = i as f64 * dt;
        while st.clock() < target {
            st.step();
            half_plane.push(st.position());
            clock.push(st.clock());
        }
        let n = clock.len();
        let (c0, c1) = (clock[n - 2], clock[n - 1]);
        let w = if c1 > c0 { ((target - c0) / (c1 - c0)).clamp(0.0, 1.0) } else { 1.0 };
        let p = half_plane[n - 2] + (half_plane[n - 1] - half_plane[n - 2]) * w;
        let z = p.exp();
        disk.push(if z.norm() > 1.0 { z / z.norm() } else { z });
        local.push(st.local_time());
    }
    Ok(StripPath { half_plane, clock, disk: DiskPath::new(dt, seed, disk, local) })
}

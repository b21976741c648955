//! Euler scheme for the Skorokhod equation in the unit disk.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::DiskPath;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::harmonic::{BoundaryField, FieldKind, HarmonicPair};
use crate::rng;

/// How an overshooting proposal is pushed back into the disk.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReflectionScheme {
    /// Exact half-line reflection of the radius, with the local-time
    /// increment drawn from the Brownian-bridge maximum of the step.
    #[default]
    Bridge,
    /// Project radially and slide along the circle by `tan(theta) * l`.
    Polar,
    /// Straight-line push along `n + tan(theta) t` from the proposal.
    Oblique,
}

/// Fast lookup of the reflection angle along the boundary.
#[derive(Clone, Debug)]
pub struct AngleLookup {
    values: Vec<f64>,
    spacing: f64,
}

impl AngleLookup {
    pub fn new(theta: &BoundaryField) -> Self {
        AngleLookup { values: theta.values().to_vec(), spacing: theta.spacing() }
    }

    pub fn theta(&self, phi: f64) -> f64 {
        let n = self.values.len();
        let x = phi.rem_euclid(TAU) / self.spacing;
        let j = (x as usize).min(n - 1);
        let frac = x - j as f64;
        self.values[j] * (1.0 - frac) + self.values[(j + 1) % n] * frac
    }

    pub fn tan(&self, phi: f64) -> f64 {
        self.theta(phi).tan()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Solve `d phi / d l = tan(theta(phi))` over a local-time increment `ell`.
    pub fn slide(&self, phi: f64, ell: f64) -> f64 {
        let est = (self.tan(phi) * ell).abs();
        let sub = ((est / (0.5 * self.spacing)).ceil() as usize).clamp(1, 4096);
        let dl = ell / sub as f64;
        let mut p = phi;
        for _ in 0..sub {
            let k1 = self.tan(p);
            p += dl * self.tan(p + 0.5 * dl * k1);
        }
        p
    }
}

/// Check that `theta` can be simulated directly.
pub fn check_angle(theta: &BoundaryField, tol: &Tolerances) -> Result<()> {
    if theta.kind() != FieldKind::Angle {
        return Err(Error::InvalidInput("simulation needs an angle field".into()));
    }
    if theta.sup_norm() >= FRAC_PI_2 - tol.tangential_guard {
        return Err(Error::UseErbmModule);
    }
    Ok(())
}

pub fn check_step(dt: f64, tol: &Tolerances) -> Result<()> {
    if !(dt > 0.0 && dt <= tol.dt_max) {
        return Err(Error::InvalidStep(dt, tol.dt_max));
    }
    Ok(())
}

/// Streaming simulator of one path.
#[derive(Clone, Debug)]
pub struct Stepper {
    lookup: AngleLookup,
    pos: Complex64,
    local: f64,
    sqrt_dt: f64,
    scheme: ReflectionScheme,
    rng: ChaCha8Rng,
    rejections: u64,
    pushback_iters: usize,
}

impl Stepper {
    pub fn new(theta: &BoundaryField, x0: Complex64, dt: f64, rng: ChaCha8Rng, scheme: ReflectionScheme, tol: &Tolerances) -> Result<Self> {
        check_angle(theta, tol)?;
        check_step(dt, tol)?;
        if x0.norm() > 1.0 + 1e-12 {
            return Err(Error::OutsideDomain);
        }
        let pos = if x0.norm() > 1.0 { x0 / x0.norm() } else { x0 };
        Ok(Stepper {
            lookup: AngleLookup::new(theta),
            pos,
            local: 0.0,
            sqrt_dt: dt.sqrt(),
            scheme,
            rng,
            rejections: 0,
            pushback_iters: tol.pushback_iters,
        })
    }

    pub fn position(&self) -> Complex64 {
        self.pos
    }

    pub fn local_time(&self) -> f64 {
        self.local
    }

    pub fn rejections(&self) -> u64 {
        self.rejections
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn gaussian_step(&mut self) -> Complex64 {
        let a: f64 = self.rng.sample(StandardNormal);
        let b: f64 = self.rng.sample(StandardNormal);
        Complex64::new(a, b) * self.sqrt_dt
    }

    /// Advance by one time step; returns the local-time increment.
    pub fn step(&mut self) -> Result<f64> {
        for _ in 0..10_000 {
            let prop = self.pos + self.gaussian_step();
            let r = prop.norm();
            if self.scheme == ReflectionScheme::Bridge {
                return Ok(self.bridge(prop, r));
            }
            if r <= 1.0 {
                self.pos = prop;
                return Ok(0.0);
            }
            let pushed = match self.scheme {
                ReflectionScheme::Polar => {
                    let ell = r - 1.0;
                    let phi = self.lookup.slide(prop.arg(), ell);
                    Some((Complex64::from_polar(1.0, phi), ell))
                }
                ReflectionScheme::Oblique => self.oblique(prop),
                ReflectionScheme::Bridge => unreachable!(),
            };
            match pushed {
                Some((p, ell)) => {
                    self.pos = p;
                    self.local += ell;
                    return Ok(ell);
                }
                None => self.rejections += 1,
            }
        }
        Err(Error::PushbackFailure)
    }

    fn bridge(&mut self, prop: Complex64, r: f64) -> f64 {
        let u0 = self.pos.norm() - 1.0;
        let w = r - 1.0;
        let dt = self.sqrt_dt * self.sqrt_dt;
        // Both ends inside: the bridge crosses with probability exp(-2 u0 w / dt).
        if w <= 0.0 && 2.0 * u0 * w > 40.0 * dt {
            self.pos = prop;
            return 0.0;
        }
        let e: f64 = self.rng.sample(Exp1);
        let top = 0.5 * (u0 + w + ((w - u0) * (w - u0) + 2.0 * dt * e).sqrt());
        if top <= 0.0 {
            self.pos = prop;
            return 0.0;
        }
        let radius = (1.0 + w - top).max(0.0);
        let phi = self.lookup.slide(prop.arg(), top);
        self.pos = Complex64::from_polar(radius, phi);
        self.local += top;
        top
    }

    fn oblique(&self, prop: Complex64) -> Option<(Complex64, f64)> {
        let mut x = prop;
        let mut ell_total = 0.0;
        for _ in 0..self.pushback_iters {
            let r = x.norm();
            if r <= 1.0 {
                return Some((x, ell_total));
            }
            let b = x / r;
            let normal = -b;
            let tangent = Complex64::new(0.0, -1.0) * normal;
            let v = normal + self.lookup.tan(b.arg()) * tangent;
            // |x + l v|^2 = 1
            let a = v.norm_sqr();
            let bq = 2.0 * (x.conj() * v).re;
            let c = r * r - 1.0;
            let disc = bq * bq - 4.0 * a * c;
            if disc >= 0.0 && bq < 0.0 {
                let ell = (-bq - disc.sqrt()) / (2.0 * a);
                let p = x + v * ell;
                let p = if p.norm() > 1.0 { p / p.norm() } else { p };
                return Some((p, ell_total + ell));
            }
            let ell = r - 1.0;
            x += v * ell;
            ell_total += ell;
        }
        None
    }
}

/// Options beyond the basic simulation contract.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub scheme: ReflectionScheme,
    /// Keep every k-th sample (0 or 1 keeps all).
    pub record_every: usize,
    /// Random stream within the seed, one per replica.
    pub stream: u64,
}

pub fn simulate(theta: &BoundaryField, x0: Complex64, dt: f64, horizon: f64, seed: u64, tol: &Tolerances) -> Result<DiskPath> {
    simulate_with(theta, x0, dt, horizon, seed, SimOptions::default(), tol)
}

pub fn simulate_with(theta: &BoundaryField, x0: Complex64, dt: f64, horizon: f64, seed: u64, opts: SimOptions, tol: &Tolerances) -> Result<DiskPath> {
    let mut st = Stepper::new(theta, x0, dt, rng::stream(seed, opts.stream), opts.scheme, tol)?;
    let steps = (horizon / dt).round();
    if !(0.0..=2f64.powi(31)).contains(&steps) {
        return Err(Error::InvalidInput(format!("horizon / dt = {steps} steps is out of range")));
    }
    let steps = steps as usize;
    let every = opts.record_every.max(1);
    let cap = steps / every + 1;
    let mut positions = Vec::with_capacity(cap);
    let mut local = Vec::with_capacity(cap);
    positions.push(st.position());
    local.push(0.0);
    for i in 1..=steps {
        st.step()?;
        if i % every == 0 {
            positions.push(st.position());
            local.push(st.local_time());
        }
    }
    let mut path = DiskPath::new(dt * every as f64, seed, positions, local);
    path.rejections = st.rejections();
    Ok(path)
}

/// Rejection sampler for the stationary density of a pair.
#[derive(Clone, Debug)]
pub struct StationarySampler {
    pair: HarmonicPair,
    bound: f64,
}

impl StationarySampler {
    pub fn new(pair: &HarmonicPair) -> Result<Self> {
        let mut max: f64 = 0.0;
        for k in 0..=32 {
            let r = k as f64 / 32.0;
            for j in 0..512 {
                let v = pair.h(Complex64::from_polar(r, TAU * j as f64 / 512.0));
                if !v.is_finite() {
                    return Err(Error::InvalidInput("stationary density is unbounded".into()));
                }
                max = max.max(v);
            }
        }
        Ok(StationarySampler { pair: pair.clone(), bound: 1.05 * max })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Complex64 {
        loop {
            let z = Complex64::from_polar(rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
            if rng.gen::<f64>() * self.bound <= self.pair.h(z) {
                return z;
            }
        }
    }

    pub fn density(&self, z: Complex64) -> f64 {
        self.pair.h(z)
    }
}

/// Run `count` independent jobs in parallel, results in job order.
pub fn replicas<T: Send>(count: usize, job: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..count).into_par_iter().map(job).collect()
}

/// Area-normalized density of the uniform law on the disk.
pub const UNIFORM_DENSITY: f64 = 1.0 / PI;

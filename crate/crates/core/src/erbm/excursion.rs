//! Brownian excursions from the circle, approximated by killed Brownian motion
//! started a small distance inside.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Smallest step of the adaptive killed walk.
pub const DT_MIN: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Excursion {
    pub root_angle: f64,
    pub dt: f64,
    /// Root, samples on the `dt` grid, terminal boundary point.
    pub points: Vec<Complex64>,
    pub depth: f64,
    pub lifetime: f64,
}

impl Excursion {
    pub fn terminal(&self) -> Complex64 {
        *self.points.last().expect("excursion has endpoints")
    }

    /// The same excursion run backwards from its terminal point.
    pub fn reversed(&self) -> Excursion {
        let mut points = self.points.clone();
        points.reverse();
        Excursion { root_angle: points[0].arg(), points, ..self.clone() }
    }
}

/// Result of one killed walk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KilledOutcome {
    pub lifetime: f64,
    pub terminal: Complex64,
    pub min_radius: f64,
    /// Whether the walk reached `|z| <= 1 - eps_dep`.
    pub deep: bool,
}

/// Brownian motion from `z0` until it leaves the unit disk.
///
/// Steps adapt to the distance from the circle (and from the depth level until
/// it is reached); crossings between samples are caught by the bridge
/// probability `exp(-2 d0 d1 / s)` of the locally flat boundary. `visit` sees
/// each step length and the new position.
pub fn killed_walk<R: Rng>(z0: Complex64, eps_dep: f64, dt_max: f64, rng: &mut R, mut visit: impl FnMut(f64, Complex64)) -> KilledOutcome {
    let level = 1.0 - eps_dep;
    let mut z = z0;
    let mut r = z.norm();
    let mut deep = r <= level;
    let mut min_radius = r;
    let mut lifetime = 0.0;
    loop {
        let d = 1.0 - r;
        let scale = if deep { d } else { d.min(r - level) };
        let s = (0.0625 * scale * scale).clamp(DT_MIN, dt_max);
        let sq = s.sqrt();
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let next = z + Complex64::new(a, b) * sq;
        let rn = next.norm();
        lifetime += s;
        if rn >= 1.0 || rng.gen::<f64>() < (-2.0 * d * (1.0 - rn) / s).exp() {
            let terminal = next / rn;
            visit(s, terminal);
            return KilledOutcome { lifetime, terminal, min_radius: min_radius.min(rn), deep };
        }
        if !deep && (rn <= level || rng.gen::<f64>() < (-2.0 * (r - level) * (rn - level) / s).exp()) {
            deep = true;
            // a bridge crossing means the continuous path reached the level.
            min_radius = min_radius.min(level);
        }
        z = next;
        r = rn;
        min_radius = min_radius.min(r);
        visit(s, z);
    }
}

/// Records positions whenever a clock crosses a multiple of `dt`.
#[derive(Clone, Debug)]
pub struct GridRecorder {
    pub dt: f64,
    pub clock: f64,
    pub points: Vec<Complex64>,
    next: f64,
}

impl GridRecorder {
    pub fn new(dt: f64, clock: f64) -> Self {
        let next = (clock / dt).floor() * dt + dt;
        GridRecorder { dt, clock, points: Vec::new(), next }
    }

    pub fn visit(&mut self, s: f64, z: Complex64) {
        self.clock += s;
        while self.clock >= self.next {
            self.points.push(z);
            self.next += self.dt;
        }
    }
}

/// Counts of one batch of trials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceCount {
    pub trials: u64,
    pub accepted: u64,
}

impl AcceptanceCount {
    pub fn rate(&self) -> f64 {
        self.accepted as f64 / self.trials.max(1) as f64
    }

    pub fn std_error(&self) -> f64 {
        let p = self.rate();
        (p * (1.0 - p) / self.trials.max(1) as f64).sqrt()
    }
}

/// Exact depth-reaching probability of the killed walk from distance `delta`.
pub fn exact_acceptance(delta: f64, eps_dep: f64) -> f64 {
    (1.0 - delta).ln() / (1.0 - eps_dep).ln()
}

/// First-order form `delta / |log(1 - eps_dep)|`.
pub fn predicted_acceptance(delta: f64, eps_dep: f64) -> f64 {
    delta / (1.0 - eps_dep).ln().abs()
}

pub fn check_scales(delta: f64, eps_dep: f64) -> Result<()> {
    if !(delta > 0.0 && delta < eps_dep && eps_dep < 1.0) {
        return Err(Error::InvalidScales { delta, eps: eps_dep });
    }
    Ok(())
}

/// One trial from `(1 - delta) e^{i root}`; `Some` only if it reaches depth `eps_dep`.
pub fn sample_excursion_with<R: Rng>(root_angle: f64, eps_dep: f64, delta: f64, dt: f64, rng: &mut R) -> Result<(Option<Excursion>, KilledOutcome)> {
    check_scales(delta, eps_dep)?;
    if !(dt > 0.0) {
        return Err(Error::InvalidStep(dt, f64::INFINITY));
    }
    let root = Complex64::from_polar(1.0, root_angle);
    let mut rec = GridRecorder::new(dt, 0.0);
    rec.points.push(root);
    let out = killed_walk(root * (1.0 - delta), eps_dep, dt, rng, |s, z| rec.visit(s, z));
    if !out.deep {
        return Ok((None, out));
    }
    while rec.points.len() > 1 && rec.points.last().map_or(false, |z| z.norm() >= 1.0 - 1e-15) {
        rec.points.pop();
    }
    rec.points.push(out.terminal);
    let exc = Excursion { root_angle, dt, points: rec.points, depth: 1.0 - out.min_radius, lifetime: out.lifetime };
    Ok((Some(exc), out))
}

/// Seeded single trial.
pub fn sample_excursion(root_angle: f64, eps_dep: f64, delta: f64, dt: f64, seed: u64) -> Result<Option<Excursion>> {
    let mut r = rng::stream(seed, 0);
    Ok(sample_excursion_with(root_angle, eps_dep, delta, dt, &mut r)?.0)
}

/// Run `trials` independent trials and count the deep ones.
pub fn acceptance_trials(eps_dep: f64, delta: f64, trials: u64, seed: u64) -> Result<AcceptanceCount> {
    check_scales(delta, eps_dep)?;
    let mut r = rng::stream(seed, 0);
    let z0 = Complex64::new(1.0 - delta, 0.0);
    let mut count = AcceptanceCount { trials, accepted: 0 };
    for _ in 0..trials {
        if killed_walk(z0, eps_dep, 1e-2, &mut r, |_, _| {}).deep {
            count.accepted += 1;
        }
    }
    Ok(count)
}

/// CDF on `(-pi, pi)` of the exit angle of Brownian motion from radius `r` on the positive axis.
pub fn exit_angle_cdf(r: f64, t: f64) -> f64 {
    0.5 + (((1.0 + r) / (1.0 - r)) * (0.5 * t).tan()).atan() / std::f64::consts::PI
}

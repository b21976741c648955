//! Whether the process hits a given boundary point: radial integral and boundary-measure tests.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{BoundaryField, FieldKind};
use super::pair::HarmonicPair;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, integrate, ShellClassifier, Verdict};

/// Radial integrand `Re(1/f(r x)) / (pi cos theta(0))`, without the `1/(1-r)` weight.
fn radial_integrand(p: &HarmonicPair, x: Complex64, r: f64) -> f64 {
    let cos0 = 1.0 / (1.0 + p.mu0 * p.mu0).sqrt();
    let f = p.f(x * r);
    (1.0 / f).re / (PI * cos0)
}

/// Classify the radial hitting integral at boundary angle `x_angle`.
pub fn hitting_test(p: &HarmonicPair, x_angle: f64, r_min: f64, tol: &Tolerances) -> Result<Verdict> {
    if !(r_min > 0.0 && r_min < 1.0) {
        return Err(Error::InvalidInput(format!("r_min = {r_min} must lie in (0, 1)")));
    }
    let x = Complex64::from_polar(1.0, x_angle);
    let rule = gauss_legendre(24);
    let head = integrate(&rule, 0.0, r_min, |r| radial_integrand(p, x, r) / (1.0 - r));
    let mut cls = ShellClassifier::new(tol.shell_window, tol.shell_ratio, tol.hitting_tol);
    let gap = 1.0 - r_min;
    for k in 0.. {
        let upper = 1.0 - gap * 0.5f64.powi(k + 1);
        if upper > tol.hitting_r_max {
            break;
        }
        // r = 1 - gap 2^{-u} turns dr/(1-r) into ln2 du.
        let shell = LN_2 * integrate(&rule, k as f64, k as f64 + 1.0, |u| radial_integrand(p, x, 1.0 - gap * 0.5f64.powf(u)));
        if !shell.is_finite() {
            return Err(Error::Inconclusive(format!("non-finite shell at k = {k}")));
        }
        if let Some(v) = cls.push(shell) {
            return Ok(shift(v, head));
        }
    }
    Err(Error::Inconclusive(format!("{:?}", shift(cls.finish(), head))))
}

fn shift(v: Verdict, head: f64) -> Verdict {
    match v {
        Verdict::Finite { estimate } => Verdict::Finite { estimate: estimate + head },
        Verdict::Inconclusive { partial, shells } => Verdict::Inconclusive { partial: partial + head, shells },
        d => d,
    }
}

/// Boundary measure given by a density (per unit arc length) plus atoms `(angle, mass)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMeasure {
    pub density: BoundaryField,
    pub atoms: Vec<(f64, f64)>,
}

impl BoundaryMeasure {
    /// Boundary measure of `Re(1 / (h + i h~ - i mu0/pi))` for the kernel `(1-|z|^2)/|w-z|^2`.
    pub fn from_pair(p: &HarmonicPair, n_grid: usize) -> Result<Self> {
        let r_far = 1.0 - 1e-7;
        let r_atom = 1.0 - 1e-9;
        let mut density = vec![0.0; n_grid];
        let mut atoms = Vec::new();
        let mut is_atom = vec![false; n_grid];
        for j in 0..n_grid {
            let t = TAU * j as f64 / n_grid as f64;
            let mass = 0.5 * (1.0 - r_atom) * (1.0 / p.f(Complex64::from_polar(r_atom, t))).re;
            if mass > 1e-6 {
                atoms.push((t, mass));
                is_atom[j] = true;
            } else {
                density[j] = (1.0 / p.f(Complex64::from_polar(r_far, t))).re.max(0.0) / TAU;
            }
        }
        // Remove the atoms' own Poisson integrals, which are O(1 - r) away from them.
        for (j, d) in density.iter_mut().enumerate() {
            let z = Complex64::from_polar(r_far, TAU * j as f64 / n_grid as f64);
            let spill: f64 = atoms
                .iter()
                .map(|&(a, m)| m * (1.0 - z.norm_sqr()) / (Complex64::from_polar(1.0, a) - z).norm_sqr())
                .sum();
            *d = (*d - spill / TAU).max(0.0);
            if *d < 1e-12 {
                *d = 0.0;
            }
        }
        for j in 0..n_grid {
            if is_atom[j] {
                density[j] = 0.5 * (density[(j + n_grid - 1) % n_grid] + density[(j + 1) % n_grid]);
            }
        }
        Ok(BoundaryMeasure { density: BoundaryField::new(FieldKind::Density, density)?, atoms })
    }

    pub fn uniform(n_grid: usize, density: f64) -> Result<Self> {
        Ok(BoundaryMeasure { density: BoundaryField::constant(FieldKind::Density, n_grid, density)?, atoms: vec![] })
    }
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Classify `int |w - x|^{-1} d sigma(w)`; an atom sitting at `x` defers to the radial test on `pair`.
pub fn measure_singularity_test(sigma: &BoundaryMeasure, x_angle: f64, pair: Option<&HarmonicPair>, tol: &Tolerances) -> Result<Verdict> {
    let mut atom_part = 0.0;
    for &(a, mass) in &sigma.atoms {
        if mass <= 0.0 {
            continue;
        }
        let gap = angular_gap(a, x_angle);
        if gap < 1e-12 {
            return match pair {
                Some(p) => hitting_test(p, x_angle, 0.5, tol),
                None => Err(Error::InvalidInput("atom at the test point needs its pair for the radial test".into())),
            };
        }
        atom_part += mass / (2.0 * (0.5 * gap).sin());
    }
    let rule = gauss_legendre(16);
    let dens = |t: f64| sigma.density.linear(t);
    let chord = |s: f64| 2.0 * (0.5 * s).sin();
    let mut cls = ShellClassifier::new(tol.shell_window, tol.shell_ratio, tol.hitting_tol);
    for k in 0..60 {
        let hi = PI * 0.5f64.powi(k);
        let lo = 0.5 * hi;
        let shell = integrate(&rule, lo, hi, |s| (dens(x_angle + s) + dens(x_angle - s)) / chord(s));
        if let Some(v) = cls.push(shell) {
            return Ok(match v {
                Verdict::Finite { estimate } => Verdict::Finite { estimate: estimate + atom_part },
                other => other,
            });
        }
    }
    Err(Error::Inconclusive(format!("{:?}", cls.finish())))
}

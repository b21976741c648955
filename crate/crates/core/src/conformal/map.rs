//! Univalent maps from the unit disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::harmonic::Mobius;

/// Any analytic map that can be evaluated with its derivative on the closed disk.
pub trait Conformal: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
    fn deriv(&self, z: Complex64) -> Result<Complex64>;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ConformalMap {
    /// `z -> e^{i rot} (z - w0) / (1 - conj(w0) z)`.
    Mobius { w0: Complex64, rot: f64 },
    /// `sum_k coefficients[k] z^k`.
    Polynomial { coefficients: Vec<Complex64> },
    /// `z -> base(scale z)` on the closed unit disk.
    ScaledComposite { base: Box<ConformalMap>, scale: f64 },
}

fn check_point(z: Complex64) -> Result<()> {
    if !(z.norm() <= 1.0 + 1e-9) {
        return Err(Error::MapDomainError(format!("{z} is outside the closed unit disk")));
    }
    Ok(())
}

impl ConformalMap {
    pub fn identity() -> Self {
        ConformalMap::Polynomial { coefficients: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] }
    }

    pub fn mobius(w0: Complex64, rot: f64) -> Result<Self> {
        Mobius::new(w0, rot)?;
        Ok(ConformalMap::Mobius { w0, rot })
    }

    /// Polynomial map, accepted only if it passes the univalence checks.
    pub fn polynomial(coefficients: Vec<Complex64>) -> Result<Self> {
        let m = ConformalMap::Polynomial { coefficients };
        m.validate(&Tolerances::default())?;
        Ok(m)
    }

    pub fn scaled(base: ConformalMap, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::InvalidInput(format!("scale {scale} must lie in (0, 1]")));
        }
        Ok(ConformalMap::ScaledComposite { base: Box::new(base), scale })
    }

    /// Derivative nonvanishing on a test grid and, for polynomials, the
    /// boundary image winding once around the image of the origin.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let n = 256;
        for i in 0..=tol.membership_radii {
            let r = i as f64 / tol.membership_radii as f64;
            for j in 0..n {
                let z = Complex64::from_polar(r, TAU * j as f64 / n as f64);
                if self.deriv(z)?.norm() < 1e-10 {
                    return Err(Error::NotUnivalent(format!("derivative vanishes near {z}")));
                }
            }
        }
        if let ConformalMap::Polynomial { .. } = self {
            let w0 = self.eval(Complex64::new(0.0, 0.0))?;
            let m = 4096;
            let pts: Vec<Complex64> = (0..m).map(|j| self.eval(Complex64::from_polar(1.0, TAU * j as f64 / m as f64))).collect::<Result<_>>()?;
            let wind: f64 = (0..m).map(|j| ((pts[(j + 1) % m] - w0) / (pts[j] - w0)).arg()).sum::<f64>() / TAU;
            if (wind - 1.0).abs() > 1e-6 {
                return Err(Error::NotUnivalent(format!("boundary winding number {wind:.3}")));
            }
            let dpts: Vec<Complex64> = (0..m).map(|j| self.deriv(Complex64::from_polar(1.0, TAU * j as f64 / m as f64))).collect::<Result<_>>()?;
            let dwind: f64 = (0..m).map(|j| (dpts[(j + 1) % m] / dpts[j]).arg()).sum::<f64>() / TAU;
            if dwind.abs() > 1e-6 {
                return Err(Error::NotUnivalent("derivative has zeros inside the disk".into()));
            }
        }
        Ok(())
    }

    /// Image of the unit circle sampled at `n` points.
    pub fn boundary(&self, n: usize) -> Result<Vec<Complex64>> {
        (0..n).map(|j| self.eval(Complex64::from_polar(1.0, TAU * j as f64 / n as f64))).collect()
    }

    /// Preimage of `w` by damped Newton from the best point of a coarse grid.
    pub fn inverse(&self, w: Complex64, tol: &Tolerances) -> Result<Complex64> {
        if let ConformalMap::Mobius { w0, rot } = self {
            return Ok(Mobius { w0: *w0, rot: *rot }.inverse().apply(w));
        }
        let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
        for i in 0..=16 {
            let r = i as f64 / 16.0;
            for j in 0..64 {
                let z = Complex64::from_polar(r, TAU * j as f64 / 64.0);
                let d = (self.eval(z)? - w).norm();
                if d < best.0 {
                    best = (d, z);
                }
            }
        }
        let mut z = best.1;
        let mut res = best.0;
        for _ in 0..tol.newton_iters {
            if res < tol.newton_tol {
                return Ok(z);
            }
            let step = (self.eval(z)? - w) / self.deriv(z)?;
            let mut lambda = 1.0;
            loop {
                let mut cand = z - step * lambda;
                if cand.norm() > 1.0 {
                    cand /= cand.norm();
                }
                let r = (self.eval(cand)? - w).norm();
                if r < res || lambda < 1e-6 {
                    z = cand;
                    res = r;
                    break;
                }
                lambda *= 0.5;
            }
        }
        if res < 1e3 * tol.newton_tol {
            Ok(z)
        } else {
            Err(Error::MapDomainError(format!("no preimage of {w} (residual {res:.2e})")))
        }
    }
}

impl Conformal for ConformalMap {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_point(z)?;
        Ok(match self {
            ConformalMap::Mobius { w0, rot } => Mobius { w0: *w0, rot: *rot }.apply(z),
            ConformalMap::Polynomial { coefficients } => coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c),
            ConformalMap::ScaledComposite { base, scale } => base.eval(z * *scale)?,
        })
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64> {
        check_point(z)?;
        Ok(match self {
            ConformalMap::Mobius { w0, rot } => Mobius { w0: *w0, rot: *rot }.deriv(z),
            ConformalMap::Polynomial { coefficients } => coefficients
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64),
            ConformalMap::ScaledComposite { base, scale } => base.deriv(z * *scale)? * *scale,
        })
    }
}

/// Enclosed area of a closed polygon by the shoelace formula.
pub fn shoelace_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|i| (poly[i].conj() * poly[(i + 1) % n]).im).sum::<f64>()
}

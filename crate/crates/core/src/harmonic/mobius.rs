//! Pairs of angle fields composed with disk automorphisms.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::field::{BoundaryField, FieldKind};
use super::pair::{theta_to_hmu, HarmonicPair};
use super::series::HarmonicFn;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Disk automorphism `z -> e^{i rot} (z - w0) / (1 - conj(w0) z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub w0: Complex64,
    pub rot: f64,
}

impl Mobius {
    pub fn new(w0: Complex64, rot: f64) -> Result<Self> {
        if w0.norm() >= 1.0 || !w0.re.is_finite() || !w0.im.is_finite() {
            return Err(Error::InvalidMobius(w0.norm()));
        }
        Ok(Mobius { w0, rot })
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, self.rot) * (z - self.w0) / (1.0 - self.w0.conj() * z)
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        let d = 1.0 - self.w0.conj() * z;
        Complex64::from_polar(1.0, self.rot) * (1.0 - self.w0.norm_sqr()) / (d * d)
    }

    pub fn inverse(&self) -> Mobius {
        let e = Complex64::from_polar(1.0, self.rot);
        Mobius { w0: -self.w0 * e, rot: -self.rot }
    }
}

/// Compose an analytic function with `phi` and re-expand it around the origin.
fn compose(h: &HarmonicFn, phi: &Mobius, n_samples: usize, order: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..n_samples)
        .map(|j| h.analytic(phi.apply(Complex64::from_polar(1.0, TAU * j as f64 / n_samples as f64))))
        .collect();
    FftPlanner::new().plan_fft_forward(n_samples).process(&mut buf);
    buf.iter().take(order + 1).map(|c| c / n_samples as f64).collect()
}

/// Pair of `theta o phi` obtained from the pair of `theta` by composition and renormalization.
pub fn mobius_transfer(theta: &BoundaryField, w0: Complex64, rot: f64, tol: &Tolerances) -> Result<HarmonicPair> {
    let phi = Mobius::new(w0, rot)?;
    let p = theta_to_hmu(theta, tol)?;
    Ok(transfer_pair(&p, &phi, theta.n_grid(), tol))
}

/// Pair of the composed angle, given the pair of the original one.
pub fn transfer_pair(p: &HarmonicPair, phi: &Mobius, n_samples: usize, tol: &Tolerances) -> HarmonicPair {
    let a = phi.apply(Complex64::new(0.0, 0.0));
    let fa = p.h.analytic(a);
    let norm = PI * fa.re;
    let order = tol.series_len.min(n_samples / 2 - 1);
    let mut coeffs = compose(&p.h, phi, n_samples, order);
    coeffs[0] -= Complex64::new(0.0, fa.im);
    let coeffs = coeffs.into_iter().map(|c| c / norm).collect();
    HarmonicPair { h: HarmonicFn::from_coeffs(coeffs), mu0: p.mu(a) / norm }
}

/// Resample `theta o phi` on the grid of `theta` by trigonometric interpolation.
pub fn compose_field(theta: &BoundaryField, phi: &Mobius) -> Result<BoundaryField> {
    let c = theta.fourier();
    let n = theta.n_grid();
    let values = (0..n)
        .map(|j| {
            let w = phi.apply(Complex64::from_polar(1.0, theta.angle(j)));
            theta.interpolate(&c, w.arg())
        })
        .map(|v| if theta.kind() == FieldKind::Angle { v.clamp(-PI / 2.0, PI / 2.0) } else { v })
        .collect();
    BoundaryField::new(theta.kind(), values)
}

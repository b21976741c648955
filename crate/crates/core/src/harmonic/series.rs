//! Harmonic functions stored through their analytic completion `F = f + i f~`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{BoundaryField, FieldKind};
use crate::config::Tolerances;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Orders at or above this are treated as truncations when their tail is not negligible.
const TRUNCATION_ORDER: usize = 256;

/// Closed-form analytic term with value 1 at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Singular {
    /// `(x + z) / (x - z)` with `x = e^{i at}`; its real part is the Poisson kernel.
    Herglotz { at: f64 },
    /// `(1 - z/x)^(-exponent)` with `x = e^{i at}`, principal branch.
    Power { at: f64, exponent: f64 },
}

impl Singular {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            Singular::Herglotz { at } => {
                let x = Complex64::from_polar(1.0, at);
                (x + z) / (x - z)
            }
            Singular::Power { at, exponent } => {
                let x = Complex64::from_polar(1.0, at);
                (Complex64::new(1.0, 0.0) - z / x).powf(-exponent)
            }
        }
    }

    pub fn location(&self) -> f64 {
        match *self {
            Singular::Herglotz { at } | Singular::Power { at, .. } => at,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularTerm {
    pub weight: Complex64,
    pub kind: Singular,
}

/// Harmonic function `f = Re F` on the disk, where
/// `F(z) = sum_k c_k z^k + sum_j w_j S_j(z)` and `Im F(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicFn {
    coeffs: Vec<Complex64>,
    singular: Vec<SingularTerm>,
}

#[derive(Serialize, Deserialize)]
struct HarmonicFnJson {
    #[serde(rename = "N")]
    n: usize,
    coeffs_re: Vec<f64>,
    coeffs_im: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    singular: Vec<SingularTerm>,
}

impl Serialize for HarmonicFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HarmonicFnJson {
            n: self.order(),
            coeffs_re: self.coeffs.iter().map(|c| c.re).collect(),
            coeffs_im: self.coeffs.iter().map(|c| c.im).collect(),
            singular: self.singular.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HarmonicFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = HarmonicFnJson::deserialize(d)?;
        if j.coeffs_re.len() != j.coeffs_im.len() || j.coeffs_re.len() != j.n + 1 {
            return Err(serde::de::Error::custom("coefficient vectors must both have length N + 1"));
        }
        let coeffs = j.coeffs_re.iter().zip(&j.coeffs_im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Ok(HarmonicFn::from_parts(coeffs, j.singular))
    }
}

impl HarmonicFn {
    /// Build from analytic coefficients; the imaginary part at the origin is removed.
    pub fn from_parts(mut coeffs: Vec<Complex64>, singular: Vec<SingularTerm>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        let im0: f64 = coeffs[0].im + singular.iter().map(|s| s.weight.im).sum::<f64>();
        coeffs[0].im -= im0;
        HarmonicFn { coeffs, singular }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self::from_parts(coeffs, Vec::new())
    }

    pub fn constant(c: f64) -> Self {
        Self::from_coeffs(vec![Complex64::new(c, 0.0)])
    }

    /// `Re z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn singular(&self) -> &[SingularTerm] {
        &self.singular
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The analytic completion `F(z)`.
    pub fn analytic(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        for s in &self.singular {
            acc += s.weight * s.kind.eval(z);
        }
        acc
    }

    /// Derivative `F'(z)` of the series part plus the closed-form terms.
    pub fn analytic_deriv(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * k as f64;
        }
        for s in &self.singular {
            let d = match s.kind {
                Singular::Herglotz { at } => {
                    let x = Complex64::from_polar(1.0, at);
                    2.0 * x / ((x - z) * (x - z))
                }
                Singular::Power { at, exponent } => {
                    let x = Complex64::from_polar(1.0, at);
                    (exponent / x) * (Complex64::new(1.0, 0.0) - z / x).powf(-exponent - 1.0)
                }
            };
            acc += s.weight * d;
        }
        acc
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        self.analytic(z).re
    }

    /// Harmonic conjugate vanishing at the origin.
    pub fn conj_eval(&self, z: Complex64) -> f64 {
        self.analytic(z).im
    }

    pub fn value_at_origin(&self) -> f64 {
        self.coeffs[0].re + self.singular.iter().map(|s| s.weight.re).sum::<f64>()
    }

    /// The harmonic conjugate as a harmonic function: its completion is `-i F + i Re F(0)`.
    pub fn conjugate(&self) -> HarmonicFn {
        let f0 = self.value_at_origin();
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().map(|c| -I * c).collect();
        coeffs[0] += I * f0;
        let singular = self.singular.iter().map(|s| SingularTerm { weight: -I * s.weight, kind: s.kind }).collect();
        Self::from_parts(coeffs, singular)
    }

    pub fn scale(&self, a: f64) -> HarmonicFn {
        HarmonicFn {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            singular: self.singular.iter().map(|s| SingularTerm { weight: s.weight * a, kind: s.kind }).collect(),
        }
    }

    pub fn add_constant(&self, a: f64) -> HarmonicFn {
        let mut out = self.clone();
        out.coeffs[0].re += a;
        out
    }

    pub fn add(&self, other: &HarmonicFn) -> HarmonicFn {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        let mut singular = self.singular.clone();
        singular.extend_from_slice(&other.singular);
        Self::from_parts(coeffs, singular)
    }

    /// Samples of `f` on the circle of radius `r` at `n` uniform angles.
    pub fn sample_circle(&self, r: f64, n: usize) -> Vec<f64> {
        (0..n).map(|j| self.eval(Complex64::from_polar(r, TAU * j as f64 / n as f64))).collect()
    }

    /// Series part damped by Fejer weights `1 - k/(N+1)`. Its boundary values are
    /// Cesaro means, which stay nonnegative for nonnegative boundary measures.
    pub fn fejer(&self) -> HarmonicFn {
        let m = (self.order() + 1) as f64;
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| c * (1.0 - k as f64 / m)).collect();
        HarmonicFn { coeffs, singular: self.singular.clone() }
    }

    /// A long series whose upper half still carries weight is a spectral
    /// truncation rather than an exact polynomial.
    pub fn is_truncation(&self) -> bool {
        let n = self.order();
        if n < TRUNCATION_ORDER {
            return false;
        }
        let top = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let tail = self.coeffs[n / 2..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        tail > 1e-9 * top
    }

    /// Extremes of `f` and of its conjugate over the membership grid of the closed disk.
    ///
    /// For spectral truncations the boundary ring uses Fejer means: the raw
    /// partial sum of a measure with an atom oscillates wildly on the circle.
    pub fn grid_extremes(&self, radii: usize, n_angles: usize) -> GridExtremes {
        let mut ext = GridExtremes::default();
        let boundary = if self.is_truncation() { self.fejer() } else { self.clone() };
        let mut visit = |z: Complex64, on_boundary: bool| {
            let w = if on_boundary { boundary.analytic(z) } else { self.analytic(z) };
            if !w.re.is_finite() || !w.im.is_finite() {
                return;
            }
            ext.update(w, z, on_boundary);
        };
        visit(Complex64::new(0.0, 0.0), false);
        for k in 1..=radii {
            let r = k as f64 / radii as f64;
            for j in 0..n_angles {
                visit(Complex64::from_polar(r, TAU * j as f64 / n_angles as f64), k == radii);
            }
        }
        ext
    }
}

/// Minimum and maximum of `Re F` and `Im F` over a grid, split by interior and boundary radius.
#[derive(Clone, Copy, Debug)]
pub struct GridExtremes {
    pub interior_min_re: (f64, Complex64),
    pub boundary_min_re: (f64, Complex64),
    pub interior_min_im: (f64, Complex64),
    pub boundary_min_im: (f64, Complex64),
    pub min_im: f64,
    pub max_im: f64,
}

impl Default for GridExtremes {
    fn default() -> Self {
        let far = (f64::INFINITY, Complex64::new(0.0, 0.0));
        GridExtremes {
            interior_min_re: far,
            boundary_min_re: far,
            interior_min_im: far,
            boundary_min_im: far,
            min_im: f64::INFINITY,
            max_im: f64::NEG_INFINITY,
        }
    }
}

impl GridExtremes {
    fn update(&mut self, w: Complex64, z: Complex64, on_boundary: bool) {
        let (re_slot, im_slot) = if on_boundary {
            (&mut self.boundary_min_re, &mut self.boundary_min_im)
        } else {
            (&mut self.interior_min_re, &mut self.interior_min_im)
        };
        if w.re < re_slot.0 {
            *re_slot = (w.re, z);
        }
        if w.im < im_slot.0 {
            *im_slot = (w.im, z);
        }
        self.min_im = self.min_im.min(w.im);
        self.max_im = self.max_im.max(w.im);
    }
}

/// Harmonic extension of boundary samples into the disk.
pub fn poisson_extend(b: &BoundaryField, tol: &Tolerances) -> HarmonicFn {
    let c = b.fourier();
    let n = tol.series_len.min(b.n_grid() / 2 - 1).max(1);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Complex64::new(c[0].re, 0.0));
    for &ck in c.iter().take(n + 1).skip(1) {
        coeffs.push(2.0 * ck);
    }
    HarmonicFn::from_coeffs(coeffs)
}

/// Boundary values of the harmonic conjugate of the extension of `b`.
pub fn conjugate_field(b: &BoundaryField) -> Result<BoundaryField> {
    let n = b.n_grid();
    let mut c = b.fourier();
    c[0] = Complex64::new(0.0, 0.0);
    c[n / 2] = Complex64::new(0.0, 0.0);
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        let sign = if k < n / 2 { -1.0 } else { 1.0 };
        *ck *= Complex64::new(0.0, sign);
    }
    let mut buf = c;
    rustfft::FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let values = buf.iter().map(|v| v.re).collect();
    BoundaryField::new(FieldKind::Generic, values).map_err(|e| Error::InternalConsistencyFailure(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn conjugate_of_monomial_is_imaginary_part() {
        for n in 1..6 {
            let f = HarmonicFn::monomial(n);
            let g = f.conjugate();
            let p = z(0.3, -0.55);
            assert!((g.eval(p) - p.powu(n as u32).im).abs() < 1e-14);
        }
        assert_eq!(HarmonicFn::constant(2.5).conjugate().eval(z(0.2, 0.1)), 0.0);
    }

    #[test]
    fn singular_terms_conjugate_consistently() {
        let h = HarmonicFn::from_parts(
            vec![z(0.1, 0.0)],
            vec![SingularTerm { weight: z(0.5, 0.0), kind: Singular::Herglotz { at: 1.0 } }],
        );
        let p = z(0.2, 0.3);
        let x = Complex64::from_polar(1.0, 1.0);
        let poisson = (1.0 - p.norm_sqr()) / (x - p).norm_sqr();
        assert!((h.eval(p) - 0.1 - 0.5 * poisson).abs() < 1e-14);
        let hh = h.conjugate().conjugate();
        assert!((hh.eval(p) - (h.value_at_origin() - h.eval(p))).abs() < 1e-14);
    }

    #[test]
    fn poisson_extend_matches_kernel_quadrature() {
        let b = BoundaryField::from_fn(FieldKind::Generic, 256, |t| {
            (1..=8).map(|k| (0.3 * k as f64).sin() * (k as f64 * t + 0.2 * k as f64).cos() / k as f64).sum::<f64>() + 0.7
        })
        .unwrap();
        let f = poisson_extend(&b, &Tolerances::default());
        let n = b.n_grid();
        for j in 0..100 {
            let p = Complex64::from_polar(0.9 * ((j as f64 + 0.5) / 100.0).sqrt(), 2.39996 * j as f64);
            let mut oracle = 0.0;
            for (i, v) in b.values().iter().enumerate() {
                let x = Complex64::from_polar(1.0, b.angle(i));
                oracle += ((x + p) / (x - p)).re * v;
            }
            oracle /= n as f64;
            assert!((f.eval(p) - oracle).abs() < 1e-9);
        }
        assert!((f.eval(z(0.0, 0.0)) - b.mean()).abs() < 1e-14);
    }

    #[test]
    fn cosine_extends_to_real_part() {
        let b = BoundaryField::from_fn(FieldKind::Generic, 64, |t| t.cos()).unwrap();
        let f = poisson_extend(&b, &Tolerances::default());
        let p = Complex64::from_polar(0.7, 1.1);
        assert!((f.eval(p) - p.re).abs() < 1e-14);
        let cf = conjugate_field(&b).unwrap();
        for (j, v) in cf.values().iter().enumerate() {
            assert!((v - b.angle(j).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn json_round_trip() {
        let f = HarmonicFn::from_coeffs(vec![z(1.0, 0.0), z(0.5, -0.25)]);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"N\":1"));
        let g: HarmonicFn = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    proptest! {
        #[test]
        fn double_conjugation(cs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..12),
                              r in 0.0f64..0.95, t in 0.0f64..6.28) {
            let f = HarmonicFn::from_coeffs(cs.iter().map(|&(a, b)| z(a, b)).collect());
            let p = Complex64::from_polar(r, t);
            let g = f.conjugate().conjugate();
            prop_assert!((g.eval(p) - (f.value_at_origin() - f.eval(p))).abs() < 1e-12);
            prop_assert!(f.conjugate().eval(z(0.0, 0.0)).abs() < 1e-15);
        }

        #[test]
        fn conjugation_is_linear(a in -2.0f64..2.0, r in 0.0f64..0.9, t in 0.0f64..6.28) {
            let f = HarmonicFn::from_coeffs(vec![z(0.2, 0.0), z(0.1, 0.4), z(-0.3, 0.2)]);
            let g = HarmonicFn::monomial(3);
            let p = Complex64::from_polar(r, t);
            let lhs = f.scale(a).add(&g).conjugate().eval(p);
            let rhs = a * f.conjugate().eval(p) + g.conjugate().eval(p);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}

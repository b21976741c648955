//! Correspondences between reflection angles, density pairs and rotation fields.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{BoundaryField, FieldKind};
use super::series::HarmonicFn;
use crate::config::Tolerances;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Stationary density `h` (normalized so `pi h(0) = 1`) and rotation number `mu0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicPair {
    pub h: HarmonicFn,
    pub mu0: f64,
}

/// Harmonic rotation field with conjugate above -1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationField {
    pub mu: HarmonicFn,
}

impl HarmonicPair {
    /// Pair with constant density `1/pi`.
    pub fn uniform(mu0: f64) -> Self {
        HarmonicPair { h: HarmonicFn::constant(1.0 / PI), mu0 }
    }

    /// `f(z) = h + i h~ - i mu0 / pi`.
    pub fn f(&self, z: Complex64) -> Complex64 {
        self.h.analytic(z) - I * (self.mu0 / PI)
    }

    pub fn h(&self, z: Complex64) -> f64 {
        self.h.eval(z)
    }

    /// Harmonic extension of the reflection angle.
    pub fn theta(&self, z: Complex64) -> f64 {
        -self.f(z).arg()
    }

    /// Rotation rate about `z`.
    pub fn mu(&self, z: Complex64) -> f64 {
        self.mu0 - PI * self.h.conj_eval(z)
    }

    /// Check positivity of `h` and the normalization on the membership grid.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let norm = PI * self.h.value_at_origin();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("pi h(0) = {norm}, expected 1")));
        }
        let ext = self.h.grid_extremes(tol.membership_radii, tol.n_grid);
        let (v, z) = ext.interior_min_re;
        if v <= tol.membership_margin {
            return Err(Error::NotInH { value: v, re: z.re, im: z.im });
        }
        let (v, z) = ext.boundary_min_re;
        if v < -tol.membership_margin {
            return Err(Error::NotInH { value: v, re: z.re, im: z.im });
        }
        Ok(())
    }
}

/// Taylor coefficients of `exp(a(z))` from those of `a`, exact in the first `a.len()` terms.
fn series_exp(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    e[0] = a[0].exp();
    for m in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=m {
            acc += a[k] * k as f64 * e[m - k];
        }
        e[m] = acc / m as f64;
    }
    e
}

/// Pair `(h, mu0)` of an angle field.
pub fn theta_to_hmu(theta: &BoundaryField, tol: &Tolerances) -> Result<HarmonicPair> {
    if theta.kind() != FieldKind::Angle {
        return Err(Error::InvalidInput("theta_to_hmu needs an angle field".into()));
    }
    let c = theta.fourier();
    let theta0 = c[0].re;
    if theta0.abs() > FRAC_PI_2 - tol.degenerate_angle {
        return Err(Error::DegenerateAngle(theta0));
    }
    let n = tol.series_len.min(theta.n_grid() / 2 - 1).max(1);
    // a = -i G where G = theta + i theta~ has coefficients theta0, 2 c_k.
    let mut a = Vec::with_capacity(n + 1);
    a.push(Complex64::new(0.0, -theta0));
    for &ck in c.iter().take(n + 1).skip(1) {
        a.push(-I * 2.0 * ck);
    }
    let scale = 1.0 / (PI * theta0.cos());
    let mut coeffs: Vec<Complex64> = series_exp(&a).into_iter().map(|e| e * scale).collect();
    let mu0 = theta0.tan();
    coeffs[0] += I * (mu0 / PI);
    Ok(HarmonicPair { h: HarmonicFn::from_coeffs(coeffs), mu0 })
}

/// Non-tangential boundary values of the angle of a pair, extrapolated from three radii.
pub fn hmu_to_theta(p: &HarmonicPair, n_grid: usize, tol: &Tolerances) -> Result<BoundaryField> {
    if n_grid < 8 || !n_grid.is_power_of_two() {
        return Err(Error::InvalidGrid(n_grid));
    }
    let eps = tol.boundary_eps;
    let mut values = Vec::with_capacity(n_grid);
    for j in 0..n_grid {
        let t = TAU * j as f64 / n_grid as f64;
        let mut th = [0.0; 3];
        for (m, slot) in th.iter_mut().enumerate() {
            let w = p.f(Complex64::from_polar(1.0 - (m + 1) as f64 * eps, t));
            if w.norm() == 0.0 || !w.re.is_finite() || w.re < 0.0 {
                return Err(Error::BranchPointAtBoundary { angle: t });
            }
            *slot = -w.arg();
        }
        let v = 3.0 * th[0] - 3.0 * th[1] + th[2];
        if v.abs() > FRAC_PI_2 + 1e-3 {
            return Err(Error::BranchPointAtBoundary { angle: t });
        }
        values.push(v.clamp(-FRAC_PI_2, FRAC_PI_2));
    }
    BoundaryField::new(FieldKind::Angle, values)
}

/// Rotation field `mu = mu0 - pi h~`, whose completion is `mu0 - i + i pi F`.
pub fn mu_field(p: &HarmonicPair, tol: &Tolerances) -> Result<RotationField> {
    let mut coeffs: Vec<Complex64> = p.h.coeffs().iter().map(|c| I * PI * c).collect();
    coeffs[0] += Complex64::new(p.mu0, -1.0);
    let singular = p
        .h
        .singular()
        .iter()
        .map(|s| super::series::SingularTerm { weight: I * PI * s.weight, kind: s.kind })
        .collect();
    let mu = HarmonicFn::from_parts(coeffs, singular);
    let out = RotationField { mu };
    check_r(&out, tol).map_err(|e| Error::InternalConsistencyFailure(e.to_string()))?;
    Ok(out)
}

fn check_r(m: &RotationField, tol: &Tolerances) -> Result<()> {
    let ext = m.mu.grid_extremes(tol.membership_radii, tol.n_grid);
    let (v, z) = ext.interior_min_im;
    if v <= -1.0 + tol.membership_margin {
        return Err(Error::NotInR { value: v, re: z.re, im: z.im });
    }
    let (v, z) = ext.boundary_min_im;
    if v < -1.0 - tol.membership_margin {
        return Err(Error::NotInR { value: v, re: z.re, im: z.im });
    }
    Ok(())
}

/// Inverse of `mu_field`: `h = (mu~ + 1)/pi`, `mu0 = mu(0)`.
pub fn mu_to_hmu(m: &RotationField, tol: &Tolerances) -> Result<HarmonicPair> {
    check_r(m, tol)?;
    let mu0 = m.mu.value_at_origin();
    let mut coeffs: Vec<Complex64> = m.mu.coeffs().iter().map(|c| -I * c / PI).collect();
    coeffs[0] += Complex64::new(1.0, mu0) / PI;
    let singular = m
        .mu
        .singular()
        .iter()
        .map(|s| super::series::SingularTerm { weight: -I * s.weight / PI, kind: s.kind })
        .collect();
    Ok(HarmonicPair { h: HarmonicFn::from_parts(coeffs, singular), mu0 })
}

/// Range of the conjugate of `phi` over the closed disk and the admissible multipliers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationBounds {
    pub k_minus: f64,
    pub k_plus: f64,
    /// Lower end of the admissible interval; `None` means unbounded.
    pub b_min: Option<f64>,
    /// Upper end of the admissible interval; `None` means unbounded.
    pub b_max: Option<f64>,
}

impl OscillationBounds {
    pub fn admits(&self, b: f64) -> bool {
        self.b_min.map_or(true, |lo| b >= lo) && self.b_max.map_or(true, |hi| b <= hi)
    }
}

pub fn oscillation_bounds(phi: &HarmonicFn, tol: &Tolerances) -> OscillationBounds {
    let ext = phi.grid_extremes(tol.membership_radii, tol.n_grid);
    let clean = |v: f64| if v.abs() < 1e-13 { 0.0 } else { v };
    let k_minus = clean(ext.min_im.min(0.0));
    let k_plus = clean(ext.max_im.max(0.0));
    let b_min = if k_plus > 0.0 { Some(-1.0 / k_plus) } else { None };
    let b_max = if k_minus < 0.0 { Some(1.0 / -k_minus) } else { None };
    OscillationBounds { k_minus, k_plus, b_min, b_max }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn constant_angles_give_uniform_density() {
        for &c in &[0.0, 0.3, -0.3, 1.0, -1.0, PI / 6.0] {
            let th = BoundaryField::constant(FieldKind::Angle, 256, c).unwrap();
            let p = theta_to_hmu(&th, &tol()).unwrap();
            assert!((p.mu0 - c.tan()).abs() < 1e-12);
            for &z in &[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.5), Complex64::new(-0.9, 0.1)] {
                assert!((p.h(z) - 1.0 / PI).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn uniform_pair_inverts_to_quarter_pi() {
        let th = hmu_to_theta(&HarmonicPair::uniform(1.0), 64, &tol()).unwrap();
        assert!(th.values().iter().all(|v| (v - PI / 4.0).abs() < 1e-12));
    }

    #[test]
    fn degenerate_mean_is_rejected() {
        let th = BoundaryField::constant(FieldKind::Angle, 64, FRAC_PI_2).unwrap();
        assert!(matches!(theta_to_hmu(&th, &tol()), Err(Error::DegenerateAngle(_))));
    }

    #[test]
    fn round_trip_smooth_field() {
        let th = BoundaryField::from_fn(FieldKind::Angle, 2048, |t| 0.4 * t.sin() + 0.2 * (3.0 * t).cos()).unwrap();
        let p = theta_to_hmu(&th, &tol()).unwrap();
        p.validate(&tol()).unwrap();
        let back = hmu_to_theta(&p, 2048, &tol()).unwrap();
        let err = th.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn normalized_power_density_angle() {
        // h = (1/pi) Re(1 + z^4/2) with mu0 = 0 has angle -arg(1 + z^4/2).
        let mut c = vec![Complex64::new(0.0, 0.0); 5];
        c[0] = Complex64::new(1.0 / PI, 0.0);
        c[4] = Complex64::new(0.5 / PI, 0.0);
        let p = HarmonicPair { h: HarmonicFn::from_coeffs(c), mu0: 0.0 };
        let th = hmu_to_theta(&p, 256, &tol()).unwrap();
        for (j, v) in th.values().iter().enumerate() {
            let z = Complex64::from_polar(1.0, th.angle(j));
            let expect = -(1.0 + z.powu(4) / 2.0).arg();
            assert!((v - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn semicircle_example_closed_form() {
        let th = BoundaryField::semicircle_split(16384).unwrap();
        let p = theta_to_hmu(&th, &tol()).unwrap();
        assert!(p.mu0.abs() < 1e-12);
        for &z in &[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)] {
            let exact = ((1.0 + z) / (1.0 - z)).re / PI;
            assert!((p.h(z) - exact).abs() < 1e-6, "{z}: {} vs {exact}", p.h(z));
        }
    }

    #[test]
    fn rotation_field_identities() {
        let p = HarmonicPair::uniform(2.0);
        let m = mu_field(&p, &tol()).unwrap();
        assert!((m.mu.eval(Complex64::new(0.3, 0.2)) - 2.0).abs() < 1e-14);
        let three = RotationField { mu: HarmonicFn::constant(3.0) };
        let q = mu_to_hmu(&three, &tol()).unwrap();
        assert!((q.mu0 - 3.0).abs() < 1e-15);
        assert!((q.h(Complex64::new(0.1, 0.7)) - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn linear_rotation_field_membership() {
        let t = Tolerances { n_grid: 512, ..tol() };
        let accept = |b: f64| mu_to_hmu(&RotationField { mu: HarmonicFn::monomial(1).scale(b) }, &t).is_ok();
        assert!(accept(0.5));
        assert!(accept(0.999));
        assert!(accept(1.0));
        assert!(!accept(1.001));
        assert!(!accept(1.5));
        assert!(accept(-0.999));
    }

    #[test]
    fn oscillation_examples() {
        let t = Tolerances { n_grid: 512, ..tol() };
        let b = oscillation_bounds(&HarmonicFn::monomial(1), &t);
        assert!((b.k_minus + 1.0).abs() < 1e-12 && (b.k_plus - 1.0).abs() < 1e-12);
        assert!((b.b_min.unwrap() + 1.0).abs() < 1e-12 && (b.b_max.unwrap() - 1.0).abs() < 1e-12);
        let b2 = oscillation_bounds(&HarmonicFn::monomial(2), &t);
        assert!((b2.k_minus + 1.0).abs() < 1e-12 && (b2.k_plus - 1.0).abs() < 1e-12);
        let c = oscillation_bounds(&HarmonicFn::constant(4.0), &t);
        assert_eq!((c.k_minus, c.k_plus, c.b_min, c.b_max), (0.0, 0.0, None, None));
        assert!(c.admits(1e9));
    }
}

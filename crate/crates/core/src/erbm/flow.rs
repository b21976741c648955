//! The angular flow `da/dt = 1 / (pi h(a))` along the circle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::harmonic::BoundaryField;

/// Trigonometric interpolant of a positive boundary density.
#[derive(Clone, Debug)]
pub struct BoundaryDensity {
    field: BoundaryField,
    coeffs: Vec<Complex64>,
}

impl BoundaryDensity {
    pub fn new(h: &BoundaryField) -> Result<Self> {
        let min = h.values().iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min >= 1e-6) {
            return Err(Error::NearSingularFlow(min));
        }
        Ok(BoundaryDensity { field: h.clone(), coeffs: h.fourier() })
    }

    pub fn eval(&self, a: f64) -> f64 {
        self.field.interpolate(&self.coeffs, a)
    }

    /// `int_a^b h(t) dt` of the interpolant, in closed form.
    pub fn arc_mass(&self, a: f64, b: f64) -> f64 {
        let n = self.coeffs.len() as i64;
        let mut acc = self.coeffs[0].re * (b - a);
        for k in 1..n / 2 {
            for kk in [k, -k] {
                let c = BoundaryField::coefficient(&self.coeffs, kk);
                let i = Complex64::new(0.0, kk as f64);
                acc += (c * ((i * b).exp() - (i * a).exp()) / i).re;
            }
        }
        acc
    }
}

/// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Integrate the autonomous scalar equation `y' = f(y)` from 0 to `t` with local tolerance `tol`.
pub fn integrate_scalar(f: impl Fn(f64) -> f64, y0: f64, t: f64, tol: f64) -> f64 {
    let mut y = y0;
    let mut s = 0.0;
    let mut step = (t / 64.0).max(1e-6);
    while s < t {
        let hstep = step.min(t - s);
        let mut k = [0.0; 7];
        for i in 0..7 {
            let yi = y + hstep * (0..i).map(|j| A[i][j] * k[j]).sum::<f64>();
            k[i] = f(yi);
        }
        let y5 = y + hstep * (0..7).map(|i| B5[i] * k[i]).sum::<f64>();
        let y4 = y + hstep * (0..7).map(|i| B4[i] * k[i]).sum::<f64>();
        let err = (y5 - y4).abs();
        if err <= tol || hstep < 1e-12 {
            y = y5;
            s += hstep;
        }
        let factor = if err == 0.0 { 4.0 } else { (0.9 * (tol / err).powf(0.2)).clamp(0.2, 4.0) };
        step = hstep * factor;
    }
    y
}

/// Solve `a_t = a_0 + int_0^t ds / (pi h(a_s))`.
pub fn angular_flow(h: &BoundaryField, a0: f64, t: f64, tol: f64) -> Result<f64> {
    let d = BoundaryDensity::new(h)?;
    Ok(integrate_scalar(|a| 1.0 / (PI * d.eval(a)), a0, t, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::FieldKind;

    #[test]
    fn uniform_density_moves_at_unit_speed() {
        let h = BoundaryField::constant(FieldKind::Density, 64, 1.0 / PI).unwrap();
        assert!((angular_flow(&h, 0.3, 2.5, 1e-10).unwrap() - 2.8).abs() < 1e-12);
    }

    #[test]
    fn period_and_arc_mass() {
        let h = BoundaryField::from_fn(FieldKind::Density, 256, |t| (1.0 + 0.3 * t.cos()) / PI).unwrap();
        let a0 = 0.4;
        let a = angular_flow(&h, a0, 2.0 * PI, 1e-10).unwrap();
        assert!((a - a0 - 2.0 * PI).abs() < 1e-8);
        let d = BoundaryDensity::new(&h).unwrap();
        let (s, t) = (0.7, 2.9);
        let as_ = angular_flow(&h, a0, s, 1e-10).unwrap();
        let at = angular_flow(&h, a0, t, 1e-10).unwrap();
        assert!((d.arc_mass(as_, at) - (t - s) / PI).abs() < 1e-7);
        // closed form of the same arc mass
        let exact = ((at - as_) + 0.3 * (at.sin() - as_.sin())) / PI;
        assert!((d.arc_mass(as_, at) - exact).abs() < 1e-12);
    }

    #[test]
    fn vanishing_density_is_rejected() {
        let h = BoundaryField::from_fn(FieldKind::Density, 64, |t| (1.0 + t.cos()) / PI).unwrap();
        assert!(matches!(angular_flow(&h, 0.0, 1.0, 1e-10), Err(Error::NearSingularFlow(_))));
    }
}

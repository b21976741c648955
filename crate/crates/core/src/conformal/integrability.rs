//! Integrability of pushed-forward stationary densities.

use std::cell::Cell;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::map::Conformal;
use crate::config::Tolerances;
use crate::harmonic::HarmonicFn;
use crate::quad::{gauss_legendre, integrate, ShellClassifier, Verdict};

/// Largest angular grid used on a circle.
const MAX_ANGLES: usize = 1 << 20;
const MAX_SHELLS: usize = 48;

/// `int_0^{2 pi} g(r e^{it}) dt` by the periodic trapezoid rule, doubled until
/// stable; the flag reports whether it settled before the grid cap.
fn circle_integral(r: f64, g: &impl Fn(Complex64) -> f64) -> (f64, bool) {
    let at = |n: usize, odd: bool| -> f64 {
        let step = if odd { 2 } else { 1 };
        let start = if odd { 1 } else { 0 };
        (start..n).step_by(step).map(|j| g(Complex64::from_polar(r, TAU * j as f64 / n as f64))).sum()
    };
    let mut n = 64;
    let mut sum = at(n, false);
    let mut value = sum * TAU / n as f64;
    while n < MAX_ANGLES {
        n *= 2;
        sum += at(n, true);
        let next = sum * TAU / n as f64;
        let done = (next - value).abs() <= 1e-12 * next.abs().max(1e-300);
        value = next;
        if done && n >= 256 {
            return (value, true);
        }
    }
    (value, false)
}

/// `int_D |f'(z)|^2 h(z) dA`, the mass of the pushed density `h o f^{-1}` on the image.
///
/// Dyadic shells toward the circle are classified like the hitting test. A
/// finite verdict is refined with further resolved shells before the tail is
/// extrapolated.
pub fn l1_pushforward_norm(h: &HarmonicFn, map: &dyn Conformal, tol: &Tolerances) -> Verdict {
    let g = |z: Complex64| match map.deriv(z) {
        Ok(d) => d.norm_sqr() * h.eval(z),
        Err(_) => f64::NAN,
    };
    let resolved = Cell::new(true);
    let radial = |r: f64| {
        let (v, ok) = circle_integral(r, &g);
        resolved.set(resolved.get() && ok);
        r * v
    };
    let head = integrate(&gauss_legendre(16), 0.0, 0.5, radial);
    let rule = gauss_legendre(8);
    let mut cls = ShellClassifier::new(tol.shell_window, tol.shell_ratio, tol.hitting_tol);
    let mut finite = false;
    for k in 1..=MAX_SHELLS {
        let (a, b) = (1.0 - 0.5f64.powi(k as i32), 1.0 - 0.5f64.powi(k as i32 + 1));
        resolved.set(true);
        let shell = integrate(&rule, a, b, radial);
        if !shell.is_finite() {
            return Verdict::Divergent { rate: f64::INFINITY };
        }
        if finite {
            if !resolved.get() {
                break;
            }
            cls.push(shell);
            if shell.abs() <= 1e-13 * cls.partial_sum().abs() {
                break;
            }
            continue;
        }
        match cls.push(shell) {
            Some(Verdict::Finite { .. }) => finite = true,
            Some(other) => return other,
            None => {}
        }
    }
    if finite {
        let s = cls.shells();
        let n = s.len();
        let q = (s[n - 1] / s[n - 2]).abs().min(0.95);
        return Verdict::Finite { estimate: head + cls.partial_sum() + s[n - 1] * q / (1.0 - q) };
    }
    match cls.finish() {
        Verdict::Inconclusive { partial, shells } => Verdict::Inconclusive { partial: partial + head, shells },
        other => other,
    }
}

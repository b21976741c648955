//! One-dimensional reference scheme for the radial part.
//!
//! The squared radius of planar Brownian motion is a squared Bessel process of
//! dimension two, `dR = 2 sqrt(R) dW + 2 dt`, which has no singular drift; the
//! reflection at `R = 1` is a projection whose overshoot in `sqrt(R)` is the
//! boundary local time.

use rand::Rng;
use rand_distr::StandardNormal;

/// `(radius, local time)` at `horizon` from radius `r0`.
pub fn radial_sample<R: Rng>(r0: f64, dt: f64, horizon: f64, rng: &mut R) -> (f64, f64) {
    let steps = (horizon / dt).round() as usize;
    let sq = dt.sqrt();
    let mut q = r0 * r0;
    let mut local = 0.0;
    for _ in 0..steps {
        let w: f64 = rng.sample(StandardNormal);
        // Euler step on the squared radius; abs reflects the rare negative overshoot at 0.
        q = (q + 2.0 * q.sqrt() * sq * w + 2.0 * dt).abs();
        if q > 1.0 {
            local += q.sqrt() - 1.0;
            q = 1.0;
        }
    }
    (q.sqrt(), local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn stays_in_unit_interval() {
        let mut r = rng::stream(5, 0);
        for _ in 0..100 {
            let (rad, l) = radial_sample(0.0, 1e-3, 1.0, &mut r);
            assert!((0.0..=1.0).contains(&rad));
            assert!(l >= 0.0);
        }
    }

    #[test]
    fn long_run_is_uniform_in_area() {
        // stationary law of the radius has density 2r, so E[R^2] = 1/2.
        let mut r = rng::stream(6, 0);
        let xs: Vec<f64> = (0..400).map(|_| radial_sample(0.5, 1e-3, 3.0, &mut r).0.powi(2)).collect();
        let m = crate::stats::mean(&xs);
        assert!((m - 0.5).abs() < 0.05, "{m}");
    }
}

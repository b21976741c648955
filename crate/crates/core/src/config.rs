//! Numeric tolerances shared by every module.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Number of power-series coefficients kept for harmonic functions.
    pub series_len: usize,
    /// Default boundary grid size.
    pub n_grid: usize,
    /// Radial offset used to read boundary values.
    pub boundary_eps: f64,
    /// Number of radii in class-membership grids.
    pub membership_radii: usize,
    /// Margin separating "on the edge of a class" from violation.
    pub membership_margin: f64,
    /// Mean angle closer than this to +-pi/2 is degenerate.
    pub degenerate_angle: f64,
    /// Largest radius reached by dyadic shell quadrature.
    pub hitting_r_max: f64,
    /// Shell contribution threshold for a divergence verdict.
    pub hitting_tol: f64,
    /// Shell ratio below which decay is called geometric.
    pub shell_ratio: f64,
    /// Number of trailing shells inspected for a verdict.
    pub shell_window: usize,
    /// Radius used when probing tangential arcs.
    pub tangential_radius: f64,
    /// Largest admissible simulation step.
    pub dt_max: f64,
    /// Distance from +-pi/2 at which simulation hands over to the excursion module.
    pub tangential_guard: f64,
    /// Oblique pushback sub-iterations before a step is resampled.
    pub pushback_iters: usize,
    /// Fraction of a horizon discarded before stationary statistics.
    pub burn_in: f64,
    /// Number of batches for batch-means standard errors.
    pub batches: usize,
    /// Threshold on the endpoint gap of an excursion for truncated winding.
    pub winding_threshold: f64,
    /// A sample with modulus above 1 minus this value is on the boundary.
    pub boundary_visit: f64,
    /// Adaptive ODE tolerance.
    pub flow_tol: f64,
    /// Newton tolerance for inverse maps.
    pub newton_tol: f64,
    /// Newton iteration cap for inverse maps.
    pub newton_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            series_len: 512,
            n_grid: 2048,
            boundary_eps: 1e-4,
            membership_radii: 64,
            membership_margin: 1e-9,
            degenerate_angle: 1e-9,
            hitting_r_max: 1.0 - 1e-12,
            hitting_tol: 1e-3,
            shell_ratio: 0.95,
            shell_window: 8,
            tangential_radius: 0.999,
            dt_max: 1e-2,
            tangential_guard: 1e-6,
            pushback_iters: 64,
            burn_in: 0.1,
            batches: 32,
            winding_threshold: 2.0 * std::f64::consts::PI,
            boundary_visit: 1e-9,
            flow_tol: 1e-10,
            newton_tol: 1e-12,
            newton_iters: 50,
        }
    }
}

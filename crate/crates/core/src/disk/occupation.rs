//! Occupation histograms on polar grids with equal-area rings.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::path::DiskPath;
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

/// `rings` equal-area annuli times `sectors` equal angular sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarGrid {
    pub rings: usize,
    pub sectors: usize,
}

impl Default for PolarGrid {
    fn default() -> Self {
        PolarGrid { rings: 8, sectors: 16 }
    }
}

impl PolarGrid {
    pub fn new(rings: usize, sectors: usize) -> Self {
        PolarGrid { rings: rings.max(1), sectors: sectors.max(1) }
    }

    pub fn cells(&self) -> usize {
        self.rings * self.sectors
    }

    pub fn ring_edge(&self, i: usize) -> f64 {
        (i as f64 / self.rings as f64).sqrt()
    }

    pub fn cell_of(&self, z: Complex64) -> usize {
        let r2 = z.norm_sqr().min(1.0);
        let ring = ((r2 * self.rings as f64) as usize).min(self.rings - 1);
        let sector = ((z.arg().rem_euclid(TAU) / TAU * self.sectors as f64) as usize).min(self.sectors - 1);
        ring * self.sectors + sector
    }

    /// Probability mass of each cell under `density` (integrated against area).
    pub fn masses(&self, density: impl Fn(Complex64) -> f64) -> Vec<f64> {
        let (xr, wr) = gauss_legendre(6);
        let (xt, wt) = gauss_legendre(6);
        let mut out = Vec::with_capacity(self.cells());
        for i in 0..self.rings {
            let (r0, r1) = (self.ring_edge(i), self.ring_edge(i + 1));
            for j in 0..self.sectors {
                let (t0, t1) = (TAU * j as f64 / self.sectors as f64, TAU * (j + 1) as f64 / self.sectors as f64);
                let mut acc = 0.0;
                for (a, wa) in xr.iter().zip(&wr) {
                    let r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * a;
                    for (b, wb) in xt.iter().zip(&wt) {
                        let t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * b;
                        acc += wa * wb * r * density(Complex64::from_polar(r, t));
                    }
                }
                out.push(acc * 0.25 * (r1 - r0) * (t1 - t0));
            }
        }
        let total: f64 = out.iter().sum();
        out.iter().map(|m| m / total).collect()
    }
}

/// Time spent in each cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub grid: PolarGrid,
    pub counts: Vec<f64>,
}

impl Histogram {
    pub fn new(grid: PolarGrid) -> Self {
        Histogram { grid, counts: vec![0.0; grid.cells()] }
    }

    pub fn add(&mut self, z: Complex64, weight: f64) {
        let c = self.grid.cell_of(z);
        self.counts[c] += weight;
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn masses(&self) -> Vec<f64> {
        let t = self.total();
        self.counts.iter().map(|c| c / t).collect()
    }

    /// Sum of absolute mass differences against predicted cell masses.
    pub fn l1_error(&self, predicted: &[f64]) -> f64 {
        self.masses().iter().zip(predicted).map(|(a, b)| (a - b).abs()).sum()
    }

    /// Area density of each cell.
    pub fn densities(&self) -> Vec<f64> {
        let area = std::f64::consts::PI / self.grid.cells() as f64;
        self.masses().iter().map(|m| m / area).collect()
    }
}

/// Occupation histogram of a path after discarding a burn-in fraction.
pub fn occupation_density(path: &DiskPath, grid: PolarGrid, burn_in: f64) -> Result<Histogram> {
    if path.len() < 2 {
        return Err(Error::InvalidInput("occupation needs a non-trivial path".into()));
    }
    let mut hist = Histogram::new(grid);
    let start = ((path.len() as f64 * burn_in) as usize).min(path.len() - 1);
    for z in &path.positions[start..] {
        hist.add(*z, 1.0);
    }
    Ok(hist)
}

/// JSON summary of a density comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub grid: PolarGrid,
    pub counts: Vec<f64>,
    pub l1_error: f64,
    pub ks: Option<f64>,
    pub p_value: Option<f64>,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_masses_are_equal() {
        let g = PolarGrid::new(4, 8);
        let m = g.masses(|_| 1.0);
        assert!(m.iter().all(|x| (x - 1.0 / 32.0).abs() < 1e-12));
    }

    #[test]
    fn cell_lookup() {
        let g = PolarGrid::new(4, 4);
        assert_eq!(g.cell_of(Complex64::new(0.1, 0.1)), 0);
        assert_eq!(g.cell_of(Complex64::new(0.99, -0.01)), 3 * 4 + 3);
        assert!(occupation_density(&DiskPath::from_positions(0.1, vec![]), g, 0.1).is_err());
    }
}

//! Sampled paths of the reflected process.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Instantaneous move along the boundary between samples `index - 1` and `index`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub index: usize,
    pub from_angle: f64,
    pub to_angle: f64,
    /// +1 for a counterclockwise arc, -1 for clockwise.
    pub arc_sign: i8,
}

impl Jump {
    /// Signed angular length of the arc.
    pub fn arc_length(&self) -> f64 {
        let tau = std::f64::consts::TAU;
        if self.arc_sign >= 0 {
            (self.to_angle - self.from_angle).rem_euclid(tau)
        } else {
            -(self.from_angle - self.to_angle).rem_euclid(tau)
        }
    }

    /// Points along the arc, endpoints excluded.
    pub fn fill(&self, pieces: usize) -> Vec<Complex64> {
        let len = self.arc_length();
        (1..pieces).map(|k| Complex64::from_polar(1.0, self.from_angle + len * k as f64 / pieces as f64)).collect()
    }
}

/// Positions and boundary local time on a uniform time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskPath {
    pub dt: f64,
    pub seed: u64,
    pub positions: Vec<Complex64>,
    pub local_time: Vec<f64>,
    pub jumps: Vec<Jump>,
    /// Steps whose pushback failed and were resampled.
    pub rejections: u64,
}

impl DiskPath {
    pub fn new(dt: f64, seed: u64, positions: Vec<Complex64>, local_time: Vec<f64>) -> Self {
        DiskPath { dt, seed, positions, local_time, jumps: Vec::new(), rejections: 0 }
    }

    /// Deterministic path from samples, with zero local time.
    pub fn from_positions(dt: f64, positions: Vec<Complex64>) -> Self {
        let n = positions.len();
        Self::new(dt, 0, positions, vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.positions.len().saturating_sub(1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        self.dt * i as f64
    }

    pub fn final_position(&self) -> Complex64 {
        *self.positions.last().expect("non-empty path")
    }

    pub fn final_local_time(&self) -> f64 {
        *self.local_time.last().unwrap_or(&0.0)
    }

    /// Sample closest to time `t`.
    pub fn at_time(&self, t: f64) -> Complex64 {
        let i = ((t / self.dt).round() as usize).min(self.len() - 1);
        self.positions[i]
    }
}

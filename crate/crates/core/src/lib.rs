//! Obliquely reflected Brownian motion in the unit disk.
//!
//! The crate is organised in layers: [`harmonic`] holds the exact analytic
//! correspondences, [`disk`] simulates the reflected process and measures its
//! path statistics, [`erbm`] assembles excursion reflected Brownian motion,
//! and [`conformal`] moves everything to other simply connected domains.

pub mod cli;
pub mod conformal;
pub mod config;
pub mod disk;
pub mod erbm;
pub mod error;
pub mod harmonic;
pub mod io;
pub mod quad;
pub mod rng;
pub mod stats;
pub mod svg;

pub use config::Tolerances;
pub use error::{Error, Result};

//! Simulation of the reflected process in the unit disk and its path statistics.

pub mod cauchy;
pub mod m1;
pub mod mollify;
pub mod occupation;
pub mod path;
pub mod radial;
pub mod sim;
pub mod strip;
pub mod winding;

pub use cauchy::{cauchy_limit_test, CauchyPoint, CauchyReport};
pub use m1::{completed_graph, frechet, m1_distance};
pub use mollify::{mollify, pairing};
pub use occupation::{occupation_density, DensityReport, Histogram, PolarGrid};
pub use path::{DiskPath, Jump};
pub use radial::radial_sample;
pub use sim::{check_angle, replicas, simulate, simulate_with, ReflectionScheme, SimOptions, StationarySampler, Stepper, UNIFORM_DENSITY};
pub use strip::{simulate_strip, StripPath, StripStepper};
pub use winding::{crossing_winding_number, excursions, local_time_rate, rotation_rate, winding, winding_star, RotationEstimate, WindingSeries};

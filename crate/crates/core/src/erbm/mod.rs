//! Excursion reflected Brownian motion: excursions glued along local time, and
//! the tangential limit of the reflected process.

pub mod assemble;
pub mod excursion;
pub mod flow;
pub mod tangential;

pub use assemble::{assemble_erbm, predicted_masses, ErbmPath, RootSampler, DEFAULT_DELTA, DEFAULT_EPS_DEP};
pub use excursion::{acceptance_trials, exact_acceptance, exit_angle_cdf, killed_walk, predicted_acceptance, sample_excursion, sample_excursion_with, AcceptanceCount, Excursion, KilledOutcome};
pub use flow::{angular_flow, integrate_scalar, BoundaryDensity};
pub use tangential::{deep_roots, pair_from_boundary, tangential_limit_experiment, TangentialOptions, TangentialReport, TangentialRun};

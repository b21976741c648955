//! Conformal maps from the disk and the time-changed processes they carry.

pub mod approx;
pub mod integrability;
pub mod map;
pub mod nearest;
pub mod selfmap;
pub mod transfer;

pub use approx::{dilated_pair, domain_approx_sequence, median, ApproxBudget, ApproxReport, ApproxRow};
pub use integrability::l1_pushforward_norm;
pub use map::{shoelace_area, Conformal, ConformalMap};
pub use nearest::{check_simple, nearest_point_angles};
pub use selfmap::{mobius_selfmap_check, RotationComparison, SimBudget, SelfMapReport};
pub use transfer::{clock, pushed_masses, transfer, TransferredPath};

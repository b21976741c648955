//! Harmonic functions on the disk and the correspondences between angle fields,
//! density pairs and rotation fields.

pub mod field;
pub mod hitting;
pub mod mobius;
pub mod pair;
pub mod series;
pub mod tangential;

pub use field::{BoundaryField, FieldKind};
pub use hitting::{hitting_test, measure_singularity_test, BoundaryMeasure};
pub use mobius::{mobius_transfer, Mobius};
pub use pair::{hmu_to_theta, mu_field, mu_to_hmu, oscillation_bounds, theta_to_hmu, HarmonicPair, OscillationBounds, RotationField};
pub use series::{conjugate_field, poisson_extend, HarmonicFn, Singular, SingularTerm};
pub use tangential::{tangential_arc_check, TangentialReport};

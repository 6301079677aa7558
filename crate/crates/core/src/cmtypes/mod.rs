//! CM fields as explicit models, the point set J_K and CM-type divisor combinatorics.

mod divisor;
mod model;
mod points;

#[cfg(test)]
mod tests;

pub use divisor::{integer_rank, CMDivisor, CMField, RankReport, Weight, Xi0Certificate};
pub use model::{Automorphism, CMFieldModel, KPlus, ModelKind, YRational};
pub use points::{
    fiber_labels, jk_points, reduction_at_infinity, separable_at_theta, validate_cm_field, CMPoint, InfinityDivisor,
    InfinityTerm, PlaceWitness, ValidationReport,
};

//! Coverings à la Gromov of finite metric samples: packings, the covering
//! properties, nerves, maps into the nerve, skeleton retraction and the
//! explicit constants.

use thiserror::Error;

pub mod constants;
pub mod cover;
pub mod nerve;
pub mod space;

pub use constants::{
    constants, margulis_radius_floor, nerve_dimension_bound, xi, ConstantsLedger, RadiusFloorCase, SIMPLEX3_VOLUME,
};
pub use cover::{
    build_covering, greedy_maximal_packing, verify_covering, CoverMode, Covering, CoveringReport, Exclusion,
    PropertyCheck,
};
pub use nerve::{
    bump, bump_derivative, lipschitz_audit, nerve, partition_map, retract_to_skeleton, star_preimage_violations,
    Barycentric, LipschitzReport, NerveComplex, RetractionConfig, RetractionOutcome,
};
pub use space::{flat_torus_grid, hyperbolic_ball, seeded_order, SampledSpace, SpaceSpec, VolumeModel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoveringError {
    #[error("{field}: {message}")]
    Field { field: &'static str, message: String },
    #[error("mandatory points {0} and {1} have intersecting quarter-balls")]
    MandatoryOverlap(usize, usize),
    #[error("μ = {mu} exceeds r/18 = {limit}")]
    MuTooLarge { mu: f64, limit: f64 },
    #[error("no center represents singular component {0}")]
    NoRepresentative(u32),
    #[error("tube of singular component {0} leaves its representative ball")]
    TubeOutsideBall(u32),
    #[error("anchor is not inside B(x₀, r₀/9)")]
    AnchorOutsideBall,
    #[error("point {point} has Σφ = {total} < 1: it is not deep in any set")]
    ShallowPoint { point: usize, total: f64 },
    #[error("sample {0} maps outside the nerve")]
    NotInNerve(usize),
    #[error("no gap point in simplex {simplex:?}: best distance {best_gap} to {samples} samples")]
    NoGap {
        simplex: Vec<usize>,
        best_gap: f64,
        samples: usize,
    },
}

impl CoveringError {
    /// Input field the error refers to, if any.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            CoveringError::Field { field, .. } => Some(field),
            CoveringError::MandatoryOverlap(..) => Some("mandatory"),
            CoveringError::MuTooLarge { .. } => Some("mode.mu"),
            CoveringError::NoRepresentative(_) | CoveringError::TubeOutsideBall(_) => Some("singular"),
            CoveringError::AnchorOutsideBall => Some("anchor"),
            _ => None,
        }
    }
}

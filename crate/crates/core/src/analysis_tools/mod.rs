//! Concave warping profiles and finite-sample Hausdorff–Gromov estimates.

mod convergence;
mod smoothing;

pub use convergence::{
    bilipschitz_distortion, eps_approximation_check, geometric_convergence_check, gh_correspondence, gh_distance_upper,
    ConvergenceReport, GhMatch, PointedSample, TermReport, GH_MAX_POINTS,
};
pub use smoothing::{build_smoothing, max_smoothing_eps, warped_curvature, SmoothingProfile, SmoothingSample, FD_STEP};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("t must lie in (1/2, 1), got {0}")]
    SlopeRatio(f64),
    #[error("r0 must be positive and finite, got {0}")]
    OuterRadius(f64),
    #[error("eps = {eps} outside (0, {max}) for this t and r0")]
    Eps { eps: f64, max: f64 },
    #[error("r = {0} outside the profile domain")]
    OutOfDomain(f64),
    #[error("r = {r} is within 1e-6 of the knot {knot}")]
    AtKnot { r: f64, knot: f64 },
    #[error("{field}: {message}")]
    Field { field: &'static str, message: String },
    #[error("sample of {0} points exceeds the exhaustive search limit")]
    TooLarge(usize),
    #[error("union distances disagree with the {0} sample")]
    RestrictionMismatch(&'static str),
    #[error("point {0} is paired with two different targets")]
    ConflictingTargets(usize),
    #[error("map {term} is undefined at limit point {point} of the ball")]
    MapUndefined { term: usize, point: usize },
}

impl AnalysisError {
    /// Input field responsible for the error, if any.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            AnalysisError::SlopeRatio(_) => Some("t"),
            AnalysisError::OuterRadius(_) => Some("r0"),
            AnalysisError::Eps { .. } => Some("eps"),
            AnalysisError::OutOfDomain(_) | AnalysisError::AtKnot { .. } => Some("r"),
            AnalysisError::Field { field, .. } => Some(field),
            AnalysisError::TooLarge(_) => Some("distances"),
            AnalysisError::RestrictionMismatch(_) => Some("union"),
            AnalysisError::ConflictingTargets(_) | AnalysisError::MapUndefined { .. } => Some("maps"),
        }
    }
}

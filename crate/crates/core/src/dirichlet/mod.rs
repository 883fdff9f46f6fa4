//! Isometry groups of `E³` and `H³`, Dirichlet domains with face pairings,
//! sector lifts around a singular axis, and Bishop–Gromov profiles.

use thiserror::Error;

pub mod domain;
pub mod isometry;
pub mod polytope;
pub mod profile;

pub use domain::{
    dirichlet_domain, singular_dirichlet, word_string, DirichletDomain, DomainFace, DomainVolume, FacePairing,
    FaceSource, GroupElement, SectorLift, DEFAULT_MAX_WORD_LENGTH,
};
pub use isometry::{bisector, minkowski_dot, GeometryKind, HalfSpace, Isometry, Point};
pub use polytope::{ConvexPolyhedron, Face, Plane};
pub use profile::{
    bishop_gromov_profile, directional_volume, directional_volume_from, is_non_increasing, ProfilePoint,
    StarPolyhedron, StarRegion,
};

use crate::model_spaces::{ball_volume, ConeAngle, Curvature};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DirichletError {
    #[error("invalid point: {0}")]
    InvalidPoint(&'static str),
    #[error("invalid isometry: {0}")]
    InvalidIsometry(&'static str),
    #[error("euclidean and lorentz data cannot be mixed")]
    KindMismatch,
    #[error("a non-identity element fixes the basepoint")]
    FixedBasepoint,
    #[error("group looks non-discrete: distinct orbit points {separation:e} apart")]
    NonDiscrete { separation: f64 },
    #[error("word enumeration exceeded {0} elements")]
    TooManyElements(usize),
    #[error("cutoff must be positive and finite, got {0}")]
    InvalidCutoff(f64),
    #[error("cone angle must lie in (0, 2π], got {0}")]
    InvalidConeAngle(f64),
    #[error("basepoint is off the singular axis")]
    BasepointOffAxis,
    #[error("deck map {0} does not commute with rotations about the axis")]
    DeckNotAxial(usize),
    #[error("center lies outside the domain")]
    CenterOutside,
    #[error("curvature {0} does not match the domain geometry")]
    CurvatureMismatch(f64),
    #[error("radii must be positive, finite and sorted increasing")]
    InvalidRadii,
    #[error("invalid region: {0}")]
    InvalidRegion(&'static str),
    #[error("packing bound needs 0 < eps ≤ R, got R = {big_r}, eps = {eps}")]
    PackingRadii { big_r: f64, eps: f64 },
}

/// Largest number of disjoint `eps`-balls inside a ball of radius `R` in a
/// space of curvature `≥ −1`.
///
/// The center of each small ball lies within `R − eps` of the big center, so
/// its `(2R − eps)`-ball contains the big ball. Bishop–Gromov then bounds
/// each small ball from below by `V₋₁(eps)/V₋₁(2R − eps)` of the total.
pub fn packing_count_bound(big_r: f64, eps: f64) -> Result<u64, DirichletError> {
    if !(eps > 0.0 && eps <= big_r && big_r.is_finite()) {
        return Err(DirichletError::PackingRadii { big_r, eps });
    }
    let k = Curvature::HYPERBOLIC;
    let ratio = ball_volume(k, ConeAngle::FULL, 2.0 * big_r - eps) / ball_volume(k, ConeAngle::FULL, eps);
    Ok((ratio * (1.0 + 1e-12)).floor() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_bound_examples() {
        assert_eq!(packing_count_bound(1.0, 1.0).unwrap(), 1);
        let b = packing_count_bound(1.0, 0.25).unwrap();
        let v = |r: f64| (2.0 * r).sinh() - 2.0 * r;
        assert_eq!(b, (v(1.75) / v(0.25)).floor() as u64);
        assert!(packing_count_bound(0.5, 1.0).is_err());
    }

    #[test]
    fn packing_bound_monotone() {
        let mut last = 0;
        for i in 1..20 {
            let b = packing_count_bound(0.3 + 0.1 * i as f64, 0.3).unwrap();
            assert!(b >= last);
            last = b;
        }
        let mut last = u64::MAX;
        for i in 1..20 {
            let b = packing_count_bound(2.0, 0.1 * i as f64).unwrap();
            assert!(b <= last);
            last = b;
        }
    }
}

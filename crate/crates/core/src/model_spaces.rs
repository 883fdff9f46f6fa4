//! Model cone spaces `H³_K(α)` and `E³(α)`.
//!
//! A point of the model space is described in Fermi (cylindrical)
//! coordinates `(r, θ, h)` around the singular axis, in which the metric is
//!
//! ```text
//! ds² = dr² + (α/2π · sinh_K r)² dθ² + cosh²(√−K r) dh²
//! ```
//!
//! with `θ` the rescaled angle in `[0, 2π)`. For `α = 2π` this is the
//! ordinary constant-curvature space written around a geodesic.
//!
//! Curvature is restricted to `K ∈ [−1, 0]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const TAU: f64 = 2.0 * PI;

/// Below this `|K|` the trigonometric functions switch to their series.
const SERIES_THRESHOLD: f64 = 1e-6;

/// Absolute tolerance handed to the adaptive quadrature.
const QUADRATURE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("curvature {0} is outside [-1, 0]")]
    Curvature(f64),
    #[error("cone angle {0} is outside (0, 2π]")]
    ConeAngle(f64),
    #[error("invalid Fermi coordinates: {0}")]
    Point(&'static str),
    #[error("invalid injectivity context: {0}")]
    Context(&'static str),
    #[error("adjacent side {adjacent} exceeds hypotenuse {hypotenuse}")]
    NoRightTriangle { adjacent: f64, hypotenuse: f64 },
    #[error("argument out of range: {0}")]
    Domain(&'static str),
}

/// Constant sectional curvature `K ∈ [−1, 0]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Curvature(f64);

impl Curvature {
    pub const HYPERBOLIC: Curvature = Curvature(-1.0);
    pub const FLAT: Curvature = Curvature(0.0);

    pub fn new(k: f64) -> Result<Self, ModelError> {
        if (-1.0..=0.0).contains(&k) {
            Ok(Curvature(k))
        } else {
            Err(ModelError::Curvature(k))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `√−K`, the inverse length scale.
    pub fn scale(self) -> f64 {
        (-self.0).sqrt()
    }
}

impl TryFrom<f64> for Curvature {
    type Error = ModelError;
    fn try_from(k: f64) -> Result<Self, Self::Error> {
        Curvature::new(k)
    }
}

impl From<Curvature> for f64 {
    fn from(k: Curvature) -> f64 {
        k.0
    }
}

/// Total angle around the singular axis, in `(0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ConeAngle(f64);

impl ConeAngle {
    pub const FULL: ConeAngle = ConeAngle(TAU);

    pub fn new(alpha: f64) -> Result<Self, ModelError> {
        if alpha > 0.0 && alpha <= TAU {
            Ok(ConeAngle(alpha))
        } else {
            Err(ModelError::ConeAngle(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `α/2π`.
    pub fn fraction(self) -> f64 {
        self.0 / TAU
    }

    pub fn is_singular(self) -> bool {
        self.0 < TAU
    }
}

impl TryFrom<f64> for ConeAngle {
    type Error = ModelError;
    fn try_from(alpha: f64) -> Result<Self, Self::Error> {
        ConeAngle::new(alpha)
    }
}

impl From<ConeAngle> for f64 {
    fn from(alpha: ConeAngle) -> f64 {
        alpha.0
    }
}

/// A point in Fermi coordinates around the singular axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub r: f64,
    pub theta: f64,
    pub h: f64,
}

impl ModelPoint {
    pub fn new(r: f64, theta: f64, h: f64) -> Result<Self, ModelError> {
        if !(r >= 0.0) || !theta.is_finite() || !h.is_finite() {
            return Err(ModelError::Point("r must be non-negative and all coordinates finite"));
        }
        Ok(ModelPoint {
            r,
            theta: theta.rem_euclid(TAU),
            h,
        })
    }

    /// Distance to the axis point at height zero.
    pub fn distance_to_origin(&self, k: Curvature) -> f64 {
        if k.value() == 0.0 {
            self.r.hypot(self.h)
        } else {
            let c = k.scale();
            ((c * self.r).cosh() * (c * self.h).cosh()).acosh() / c
        }
    }
}

/// Lower injectivity data at a basepoint: `Inj ≥ a`, cone angles `≥ ω`, and
/// the radius `R` of the ball under consideration.
///
/// `omega = 2π` stands for a manifold with empty singular locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InjectivityContext {
    pub a: f64,
    pub omega: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
}

impl InjectivityContext {
    pub fn new(a: f64, omega: f64, big_r: f64) -> Result<Self, ModelError> {
        if !(a > 0.0) || !(big_r > 0.0) {
            return Err(ModelError::Context("a and R must be positive"));
        }
        if !(omega > 0.0 && (omega <= PI || omega == TAU)) {
            return Err(ModelError::Context("omega must lie in (0, π] or equal 2π"));
        }
        Ok(InjectivityContext { a, omega, big_r })
    }

    pub fn is_nonsingular(&self) -> bool {
        self.omega == TAU
    }
}

/// `sinh(√−K r)/√−K`, equal to `r` when `K = 0`.
pub fn sinh_k(k: Curvature, r: f64) -> f64 {
    let kv = k.value();
    if kv.abs() < SERIES_THRESHOLD {
        let r3 = r * r * r;
        r + (-kv) * r3 / 6.0 + kv * kv * r3 * r * r / 120.0
    } else {
        let c = k.scale();
        (c * r).sinh() / c
    }
}

/// `tanh(√−K r)/√−K`, equal to `r` when `K = 0`.
pub fn tanh_k(k: Curvature, r: f64) -> f64 {
    let kv = k.value();
    if kv.abs() < SERIES_THRESHOLD {
        let r3 = r * r * r;
        r - (-kv) * r3 / 3.0 + 2.0 * kv * kv * r3 * r * r / 15.0
    } else {
        let c = k.scale();
        (c * r).tanh() / c
    }
}

/// Inverse of [`tanh_k`]. Requires `y < 1/√−K`.
pub fn artanh_k(k: Curvature, y: f64) -> Result<f64, ModelError> {
    let kv = k.value();
    if kv.abs() < SERIES_THRESHOLD {
        let y3 = y * y * y;
        return Ok(y + (-kv) * y3 / 3.0 + kv * kv * y3 * y * y / 5.0);
    }
    let c = k.scale();
    if (c * y).abs() >= 1.0 {
        return Err(ModelError::Domain("artanh_K argument beyond the ideal boundary"));
    }
    Ok((c * y).atanh() / c)
}

/// `cosh(√−K r)`.
pub fn cosh_k(k: Curvature, r: f64) -> f64 {
    (k.scale() * r).cosh()
}

/// Coefficients `(g_rr, g_θθ, g_hh)` of the cone metric in Fermi coordinates.
pub fn fermi_metric_coeffs(k: Curvature, alpha: ConeAngle, r: f64) -> (f64, f64, f64) {
    let s = alpha.fraction() * sinh_k(k, r);
    let ch = cosh_k(k, r);
    (1.0, s * s, ch * ch)
}

/// Volume of the round ball of radius `r` in the non-singular space.
fn round_ball_volume(k: Curvature, r: f64) -> f64 {
    let kv = k.value();
    if kv == 0.0 {
        4.0 / 3.0 * PI * r.powi(3)
    } else if kv == -1.0 {
        PI * ((2.0 * r).sinh() - 2.0 * r)
    } else {
        quadrature::integrate(
            |s| {
                let sh = sinh_k(k, s);
                4.0 * PI * sh * sh
            },
            0.0,
            r,
            QUADRATURE_TOLERANCE,
        )
        .integral
    }
}

/// Volume of the standard ball of radius `r` centred on the singular axis.
///
/// For a singular angle this is the fraction `α/2π` of the round volume.
pub fn ball_volume(k: Curvature, alpha: ConeAngle, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    alpha.fraction() * round_ball_volume(k, r)
}

/// The same volume as [`ball_volume`], obtained by integrating the Fermi
/// volume element `√(g_rr g_θθ g_hh) dr dθ dh` over the ball.
///
/// The ball is described as `{ |h| ≤ R, r ≤ ρ(h) }` where `ρ(h)` solves
/// `cosh(cρ) cosh(ch) = cosh(cR)`.
pub fn ball_volume_fermi(k: Curvature, alpha: ConeAngle, radius: f64) -> f64 {
    if radius <= 0.0 {
        return 0.0;
    }
    let c = k.scale();
    let rho = move |h: f64| -> f64 {
        if c == 0.0 {
            (radius * radius - h * h).max(0.0).sqrt()
        } else {
            ((c * radius).cosh() / (c * h).cosh()).max(1.0).acosh() / c
        }
    };
    let element = move |r: f64| -> f64 {
        let (g_rr, g_tt, g_hh) = fermi_metric_coeffs(k, alpha, r);
        (g_rr * g_tt * g_hh).sqrt()
    };
    let slice = |h: f64| -> f64 {
        let top = rho(h);
        if top <= 0.0 {
            return 0.0;
        }
        TAU * quadrature::integrate(element, 0.0, top, 1e-13).integral
    };
    // symmetric in h
    2.0 * quadrature::integrate(slice, 0.0, radius, 1e-12).integral
}

/// `c₂(R)|Σ| = 2π sinh²(R+1)|Σ|`, an upper bound for the volume of the
/// `(R+1)`-neighbourhood of a singular circle of length `|Σ|`.
pub fn tube_volume_bound(big_r: f64, sigma_length: f64) -> f64 {
    let s = (big_r + 1.0).sinh();
    TAU * s * s * sigma_length
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InjectivityConstants {
    /// Lower bound for `Vol(B(x, 1))`.
    pub c1: f64,
    pub c2: f64,
    pub delta1: f64,
    /// Per-case values: non-singular ball, ball centred near the axis, ball
    /// away from the axis. `None` for cases that cannot occur.
    pub cases: [Option<f64>; 3],
}

/// Constants `c₁`, `c₂`, `δ₁ = c₁/c₂` bounding the length of a short singular
/// component from below.
pub fn injectivity_constants(ctx: &InjectivityContext) -> InjectivityConstants {
    let a = ctx.a;
    let omega = ctx.omega;

    let a0 = a.min(1.0);
    let nonsingular = 4.0 / 3.0 * PI * a0.powi(3);

    let cases = if ctx.is_nonsingular() {
        [Some(nonsingular), None, None]
    } else {
        let a0 = a.min(0.5);
        let near_axis = 2.0 / 3.0 * omega * a0.powi(3);
        let b = a.min(0.5) * (omega / 2.0).sin() / 2.0;
        let b0 = b.min(1.0);
        let far = 4.0 / 3.0 * PI * b0.powi(3);
        [Some(nonsingular), Some(near_axis), Some(far)]
    };
    let c1 = cases.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let c2 = tube_volume_bound(ctx.big_r, 1.0);
    InjectivityConstants {
        c1,
        c2,
        delta1: c1 / c2,
        cases,
    }
}

/// Angle at `p` of a geodesic right triangle with adjacent leg `d_adjacent`
/// and hypotenuse `d_hypotenuse`: `cos θ = tanh_K(adj)/tanh_K(hyp)`.
pub fn right_triangle_angle(k: Curvature, d_adjacent: f64, d_hypotenuse: f64) -> Result<f64, ModelError> {
    if d_adjacent < 0.0 || d_adjacent > d_hypotenuse {
        return Err(ModelError::NoRightTriangle {
            adjacent: d_adjacent,
            hypotenuse: d_hypotenuse,
        });
    }
    if d_hypotenuse == 0.0 || d_adjacent == d_hypotenuse {
        return Ok(0.0);
    }
    let ratio = tanh_k(k, d_adjacent) / tanh_k(k, d_hypotenuse);
    Ok(ratio.clamp(-1.0, 1.0).acos())
}

/// Distance from the vertex of a cone of angle `α` to a geodesic loop based
/// at distance `d`: `d cos(α/2)`.
pub fn geodesic_loop_distance(alpha: f64, d: f64) -> Result<f64, ModelError> {
    if !(alpha > 0.0 && alpha < TAU) {
        return Err(ModelError::ConeAngle(alpha));
    }
    if !(d >= 0.0) {
        return Err(ModelError::Domain("distance must be non-negative"));
    }
    Ok(d * (alpha / 2.0).cos())
}

/// Step and cumulative bounds of the arc-shortening iteration:
/// `step_n = artanh_K(2^{−(n+1)})` and `Σ_{i≤n} (step_i + 2^{−(i+1)})`.
pub fn arc_iteration_bound(n: u32, k: Curvature) -> (f64, f64) {
    let mut cumulative = 0.0;
    let mut step = 0.0;
    for i in 0..=n {
        let half = 0.5f64.powi(i as i32 + 1);
        // 2^{-(i+1)} ≤ 1/2 < 1/√−K, so the inverse always exists
        step = artanh_k(k, half).expect("argument below 1/2");
        cumulative += step + half;
    }
    (step, cumulative)
}

/// Limit of the cumulative bound of [`arc_iteration_bound`] as `n → ∞`.
pub fn arc_iteration_limit(k: Curvature) -> f64 {
    let mut total = 0.0;
    for i in 0..200 {
        let half = 0.5f64.powi(i + 1);
        let term = artanh_k(k, half).expect("argument below 1/2") + half;
        total += term;
        if term < 1e-18 {
            break;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    fn alpha(v: f64) -> ConeAngle {
        ConeAngle::new(v).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Curvature::new(0.1).is_err());
        assert!(Curvature::new(-1.5).is_err());
        assert!(ConeAngle::new(0.0).is_err());
        assert!(ConeAngle::new(7.0).is_err());
        assert!(ModelPoint::new(-1.0, 0.0, 0.0).is_err());
        assert_relative_eq!(ModelPoint::new(1.0, 7.0, 0.0).unwrap().theta, 7.0 - TAU);
        assert!(InjectivityContext::new(1.0, 4.0, 1.0).is_err());
        assert!(InjectivityContext::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn fermi_examples() {
        assert_eq!(fermi_metric_coeffs(k(0.0), alpha(PI), 2.0), (1.0, 1.0, 1.0));
        assert_eq!(fermi_metric_coeffs(k(0.0), ConeAngle::FULL, 1.0), (1.0, 1.0, 1.0));
        let (a, b, c) = fermi_metric_coeffs(k(-1.0), ConeAngle::FULL, 1.0);
        assert_eq!(a, 1.0);
        assert_relative_eq!(b, 1f64.sinh().powi(2), max_relative = 1e-15);
        assert_relative_eq!(c, 1f64.cosh().powi(2), max_relative = 1e-15);
    }

    #[test]
    fn fermi_continuity_at_flat() {
        for &(a, r) in &[(TAU, 1.0), (PI / 3.0, 2.5), (1.0, 8.0)] {
            let flat = fermi_metric_coeffs(k(0.0), alpha(a), r).1;
            let mut previous = f64::INFINITY;
            for e in 3..=9 {
                let kv = -(10f64).powi(-e);
                let diff = (fermi_metric_coeffs(k(kv), alpha(a), r).1 - flat).abs();
                // leading term (α/2π)² r⁴ |K| / 3
                assert!(diff <= (a / TAU).powi(2) * r.powi(4) * kv.abs(), "{diff}");
                assert!(diff <= previous);
                previous = diff;
            }
        }
    }

    #[test]
    fn trig_examples() {
        assert_eq!(sinh_k(k(0.0), 3.7), 3.7);
        assert_relative_eq!(tanh_k(k(-1.0), 1.0), 0.761_594_155_955_764_9, max_relative = 1e-15);
        assert_relative_eq!(sinh_k(k(-0.25), 2.0), 1f64.sinh() / 0.5, max_relative = 1e-15);
        assert_relative_eq!(artanh_k(k(-1.0), 0.5).unwrap(), 0.5f64.atanh());
        assert!(artanh_k(k(-1.0), 1.0).is_err());
    }

    #[test]
    fn series_matches_closed_form_across_threshold() {
        let kv: f64 = -0.999e-6;
        let c = (-kv).sqrt();
        for &r in &[0.1, 1.0, 4.0] {
            assert_relative_eq!(sinh_k(k(kv), r), (c * r).sinh() / c, max_relative = 1e-12);
            assert_relative_eq!(tanh_k(k(kv), r), (c * r).tanh() / c, max_relative = 1e-12);
        }
    }

    #[test]
    fn volume_examples() {
        assert_relative_eq!(
            ball_volume(k(-1.0), ConeAngle::FULL, 1.0),
            PI * (2f64.sinh() - 2.0),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            ball_volume(k(0.0), alpha(PI), 1.0),
            2.0 / 3.0 * PI,
            max_relative = 1e-15
        );
        assert_eq!(ball_volume(k(0.0), ConeAngle::FULL, 0.0), 0.0);
    }

    #[test]
    fn interior_curvature_volume_matches_rescaled_closed_form() {
        // V_K(r) = π (sinh 2cr − 2cr)/c³ with c = √−K
        for &kv in &[-0.5f64, -0.1, -0.01] {
            let c = (-kv).sqrt();
            for &r in &[0.3, 1.0, 3.0] {
                let expected = PI * ((2.0 * c * r).sinh() - 2.0 * c * r) / c.powi(3);
                let got = ball_volume(k(kv), ConeAngle::FULL, r);
                assert!((got - expected).abs() < 1e-9, "K={kv} r={r}: {got} vs {expected}");
            }
        }
    }

    #[test]
    fn fermi_quadrature_reproduces_flat_volume() {
        let v = ball_volume_fermi(k(0.0), ConeAngle::FULL, 1.5);
        assert!((v - 4.0 / 3.0 * PI * 1.5f64.powi(3)).abs() < 1e-9);
    }

    #[test]
    fn tube_bound_examples() {
        assert_relative_eq!(tube_volume_bound(0.0, 1.0), 8.677_7, epsilon = 1e-4);
        assert_relative_eq!(tube_volume_bound(1.0, 2.0), 165.30, epsilon = 1e-2);
        assert_relative_eq!(tube_volume_bound(0.0, 1e-9), 1e-9 * tube_volume_bound(0.0, 1.0));
    }

    #[test]
    fn injectivity_examples() {
        let c = injectivity_constants(&InjectivityContext::new(1.0, TAU, 3.0).unwrap());
        assert_relative_eq!(c.c1, 4.0 * PI / 3.0);

        let c = injectivity_constants(&InjectivityContext::new(0.5, PI, 1.0).unwrap());
        assert_relative_eq!(c.cases[1].unwrap(), PI / 12.0);
        assert_relative_eq!(c.cases[2].unwrap(), PI / 48.0);
        assert_relative_eq!(c.c1, PI / 48.0);
        assert_relative_eq!(c.c2, TAU * 2f64.sinh().powi(2));
        assert_relative_eq!(c.delta1, c.c1 / c.c2);

        let small = injectivity_constants(&InjectivityContext::new(0.5, 1e-4, 1.0).unwrap());
        let smaller = injectivity_constants(&InjectivityContext::new(0.5, 1e-5, 1.0).unwrap());
        assert!(smaller.delta1 < small.delta1 && smaller.delta1 > 0.0);
    }

    #[test]
    fn right_triangle_examples() {
        assert_eq!(right_triangle_angle(k(-0.3), 1.2, 1.2).unwrap(), 0.0);
        assert_relative_eq!(
            right_triangle_angle(k(0.0), 1.0, 2.0).unwrap(),
            PI / 3.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            right_triangle_angle(k(-1.0), 0.5, 1.0).unwrap(),
            (0.5f64.tanh() / 1f64.tanh()).acos()
        );
        assert!(right_triangle_angle(k(-1.0), 2.0, 1.0).is_err());
    }

    #[test]
    fn loop_distance() {
        assert!(geodesic_loop_distance(PI, 1.0).unwrap().abs() < 1e-16);
        assert_relative_eq!(
            geodesic_loop_distance(TAU / 3.0, 1.0).unwrap(),
            0.5,
            max_relative = 1e-15
        );
        let mut d = 1.0;
        for _ in 0..10 {
            d = geodesic_loop_distance(TAU / 3.0, d).unwrap();
        }
        assert_relative_eq!(d, 2f64.powi(-10), max_relative = 1e-12);
        assert!(geodesic_loop_distance(TAU, 1.0).is_err());
    }

    #[test]
    fn arc_iteration() {
        assert_eq!(arc_iteration_bound(0, k(0.0)), (0.5, 1.0));
        assert_relative_eq!(arc_iteration_limit(k(0.0)), 2.0, max_relative = 1e-15);
        assert_relative_eq!(
            arc_iteration_bound(0, k(-1.0)).0,
            0.549_306_144_334_054_8,
            max_relative = 1e-15
        );
        let mut previous = 0.0;
        for n in 0..40 {
            let (_, total) = arc_iteration_bound(n, k(-1.0));
            assert!(total > previous);
            previous = total;
        }
        assert!(previous <= arc_iteration_limit(k(-1.0)));
    }
}

//! Explicit constants of the covering argument.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::space::hyperbolic_ball;
use super::CoveringError;

/// Volume of the standard 3-simplex `{x ∈ ℝ⁴ : x ≥ 0, Σx = 1}`.
pub const SIMPLEX3_VOLUME: f64 = 1.0 / 3.0;

/// `ξ_k = 16√(2(k+1))/3`.
pub fn xi(k: usize) -> f64 {
    16.0 * (2.0 * (k as f64 + 1.0)).sqrt() / 3.0
}

/// `⌈sup_{r ∈ (0,1]} V₋₁(8r)/V₋₁(r/4)⌉`, maximised on a grid together with
/// the endpoint `r = 1`.
pub fn nerve_dimension_bound() -> u64 {
    let ratio = |r: f64| hyperbolic_ball(8.0 * r) / hyperbolic_ball(r / 4.0);
    let sup = (1..=10_000)
        .map(|i| ratio(i as f64 / 10_000.0))
        .fold(ratio(1.0), f64::max);
    sup.ceil() as u64
}

/// Smallest `a` with `t³/a ≤ V₋₁(t) ≤ a t³` on `(0, end]`.
pub fn volume_comparison_constant(end: f64) -> f64 {
    let grid = 100_000;
    let mut a: f64 = 0.0;
    for i in 1..=grid {
        let t = end * i as f64 / grid as f64;
        let q = hyperbolic_ball(t) / t.powi(3);
        a = a.max(q).max(1.0 / q);
    }
    // t → 0 limit of t³/V₋₁(t)
    a.max(3.0 / (4.0 * PI))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    pub a_interval_end: f64,
    pub a: f64,
    #[serde(rename = "N")]
    pub n: u64,
    /// `ξ_k` for `k = 0..=3`.
    pub xi: Vec<f64>,
    pub eta0: f64,
    /// `Vol(Δ³)/((N+1)(4ξ₃/3)³)`, which `η₀` must stay below.
    pub eta0_bound: f64,
    pub b0: f64,
    pub b1: f64,
    #[serde(rename = "D0")]
    pub d0: f64,
    #[serde(rename = "D1")]
    pub d1: f64,
}

pub fn constants(a_interval_end: f64) -> Result<ConstantsLedger, CoveringError> {
    if !(a_interval_end > 0.0 && a_interval_end.is_finite()) {
        return Err(CoveringError::Field {
            field: "a_interval_end",
            message: format!("must be positive, got {a_interval_end}"),
        });
    }
    let a = volume_comparison_constant(a_interval_end);
    let n = nerve_dimension_bound();
    let xi3 = xi(3);
    let eta0_bound = SIMPLEX3_VOLUME / ((n as f64 + 1.0) * (4.0 * xi3 / 3.0).powi(3));
    let eta0 = eta0_bound / 2.0;
    let b0 = 2f64.powi(15) * PI * a * a;
    let b1 = b0 * 2f64.powi(21);
    Ok(ConstantsLedger {
        a_interval_end,
        a,
        n,
        xi: (0..=3).map(xi).collect(),
        eta0,
        eta0_bound,
        b0,
        b1,
        d0: (b0 / eta0).max(300.0),
        d1: (b1 / eta0).max(1e4),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum RadiusFloorCase {
    /// The anchor ball itself.
    AnchorB,
    /// Abelian-type neighbourhood away from the anchor.
    AbelianFar,
    /// Abelian or pillow-type neighbourhood near an anchor of scale `nu0`.
    AbelianNear {
        nu0: f64,
        #[serde(rename = "D")]
        big_d: f64,
    },
}

/// Lower bound for `r_i` in each case: `ν/16`, `ν/128` or
/// `min(ν/2⁴, ν₀/2¹⁰)`.
pub fn margulis_radius_floor(nu: f64, case: RadiusFloorCase) -> Result<f64, CoveringError> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(CoveringError::Field {
            field: "nu",
            message: format!("must lie in (0, 1], got {nu}"),
        });
    }
    Ok(match case {
        RadiusFloorCase::AnchorB => nu / 16.0,
        RadiusFloorCase::AbelianFar => nu / 128.0,
        RadiusFloorCase::AbelianNear { nu0, big_d } => {
            if !(nu0 > 0.0 && nu0.is_finite()) {
                return Err(CoveringError::Field {
                    field: "nu0",
                    message: format!("must be positive, got {nu0}"),
                });
            }
            if !(big_d > 1e4) {
                return Err(CoveringError::Field {
                    field: "D",
                    message: format!("must exceed 1e4, got {big_d}"),
                });
            }
            (nu / 16.0).min(nu0 / 1024.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn xi3_value() {
        assert_relative_eq!(xi(3), 16.0 * 8f64.sqrt() / 3.0, epsilon = 1e-12);
        assert_relative_eq!(xi(3), 15.084944665313014, epsilon = 1e-12);
    }

    #[test]
    fn nerve_bound_at_unit_radius() {
        let exact = ((16f64.sinh() - 16.0) / (0.5f64.sinh() - 0.5)).ceil() as u64;
        assert_eq!(nerve_dimension_bound(), exact);
    }

    #[test]
    fn a_is_attained_at_the_endpoint() {
        let a = volume_comparison_constant(8.0);
        assert_relative_eq!(a, PI * (16f64.sinh() - 16.0) / 512.0, max_relative = 1e-14);
    }

    #[test]
    fn ledger_relations() {
        let c = constants(8.0).unwrap();
        assert_eq!(c.b1, c.b0 * 2f64.powi(21));
        assert!(c.d0 >= 300.0 && c.d1 >= 1e4);
        assert!(c.eta0 < c.eta0_bound);
    }

    #[test]
    fn floors() {
        assert_eq!(
            margulis_radius_floor(1.0, RadiusFloorCase::AnchorB).unwrap(),
            1.0 / 16.0
        );
        assert_eq!(
            margulis_radius_floor(1.0, RadiusFloorCase::AbelianFar).unwrap(),
            1.0 / 128.0
        );
        let near = |nu0| RadiusFloorCase::AbelianNear { nu0, big_d: 2e4 };
        assert_eq!(margulis_radius_floor(0.5, near(0.25)).unwrap(), 0.5 / 2048.0);
        assert_eq!(margulis_radius_floor(1.0, near(32.0)).unwrap(), 1.0 / 32.0);
        assert!(margulis_radius_floor(1.0, RadiusFloorCase::AbelianNear { nu0: 0.5, big_d: 100.0 }).is_err());
    }
}

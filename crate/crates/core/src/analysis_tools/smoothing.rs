//! Concave profiles `f` bending the cone metric `dr² + r²dθ² + dh²` into
//! `dr² + t²(r+ε)²dθ² + dh²` far from the axis.

use serde::Serialize;

use super::AnalysisError;

/// Step of the central differences used for `f''`.
pub const FD_STEP: f64 = 1e-5;
const KNOT_GUARD: f64 = 1e-6;

/// `f(r) = r` up to `r* − h`, a concave parabola on `[r* − h, r* + h]`,
/// then `t(r + ε)`; `r* = tε/(1−t)` is where the two lines cross.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingProfile {
    pub t: f64,
    pub r0: f64,
    pub eps: f64,
    pub r_star: f64,
    pub half_width: f64,
    /// Ends of the parabolic arc.
    pub knots: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothingSample {
    pub r: f64,
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
    pub curvature: f64,
}

/// Supremum of admissible `ε`: the crossing point `r*` must lie in
/// `(ε, r0/2)` and `ε < r0/4`.
pub fn max_smoothing_eps(t: f64, r0: f64) -> f64 {
    (r0 / 4.0).min(r0 * (1.0 - t) / (2.0 * t))
}

pub fn build_smoothing(t: f64, r0: f64, eps: f64) -> Result<SmoothingProfile, AnalysisError> {
    if !(t > 0.5 && t < 1.0) {
        return Err(AnalysisError::SlopeRatio(t));
    }
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(AnalysisError::OuterRadius(r0));
    }
    let max = max_smoothing_eps(t, r0);
    if !(eps > 0.0 && eps < max) {
        return Err(AnalysisError::Eps { eps, max });
    }
    let r_star = t * eps / (1.0 - t);
    let half_width = (r_star - eps).min(r0 / 2.0 - r_star);
    Ok(SmoothingProfile {
        t,
        r0,
        eps,
        r_star,
        half_width,
        knots: vec![r_star - half_width, r_star + half_width],
    })
}

impl SmoothingProfile {
    /// Right end of the domain `[0, r0 − ε)`.
    pub fn domain_end(&self) -> f64 {
        self.r0 - self.eps
    }

    fn bend(&self) -> f64 {
        (1.0 - self.t) / (2.0 * self.half_width)
    }

    pub fn value(&self, r: f64) -> f64 {
        let [a, b] = [self.knots[0], self.knots[1]];
        if r <= a {
            r
        } else if r >= b {
            self.t * (r + self.eps)
        } else {
            r - 0.5 * self.bend() * (r - a) * (r - a)
        }
    }

    pub fn slope(&self, r: f64) -> f64 {
        let [a, b] = [self.knots[0], self.knots[1]];
        if r <= a {
            1.0
        } else if r >= b {
            self.t
        } else {
            1.0 - self.bend() * (r - a)
        }
    }

    /// Closed-form `f''`, zero off the arc.
    pub fn second(&self, r: f64) -> f64 {
        if r > self.knots[0] && r < self.knots[1] {
            -self.bend()
        } else {
            0.0
        }
    }

    /// `f''` by central differences of `f'`.
    pub fn second_fd(&self, r: f64) -> f64 {
        (self.slope(r + FD_STEP) - self.slope(r - FD_STEP)) / (2.0 * FD_STEP)
    }

    /// Largest curvature `−f''/f` of the warped metric, reached at the arc start.
    pub fn peak_curvature(&self) -> (f64, f64) {
        let r = self.knots[0] + KNOT_GUARD.max(self.half_width * 1e-3);
        (r, -self.second(r) / self.value(r))
    }

    /// `n` evenly spaced rows over `(0, r0 − ε)` with closed-form derivatives.
    pub fn table(&self, n: usize) -> Vec<SmoothingSample> {
        let end = self.domain_end();
        (1..=n)
            .map(|i| {
                let r = end * i as f64 / (n + 1) as f64;
                let f = self.value(r);
                let d2f = self.second(r);
                SmoothingSample {
                    r,
                    f,
                    df: self.slope(r),
                    d2f,
                    curvature: -d2f / f,
                }
            })
            .collect()
    }
}

/// Sectional curvature `−f''/f` of planes orthogonal to the axis.
pub fn warped_curvature(p: &SmoothingProfile, r: f64) -> Result<f64, AnalysisError> {
    if !(r > 0.0 && r < p.domain_end()) {
        return Err(AnalysisError::OutOfDomain(r));
    }
    if let Some(&knot) = p.knots.iter().find(|&&k| (r - k).abs() < KNOT_GUARD) {
        return Err(AnalysisError::AtKnot { r, knot });
    }
    Ok(-p.second_fd(r) / p.value(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn clauses_hold_exactly() {
        let p = build_smoothing(0.6, 1.0, 0.05).unwrap();
        assert_eq!(p.value(0.02), 0.02);
        assert_eq!(p.value(0.05), 0.05);
        assert_eq!(p.value(0.9), 0.6 * (0.9 + 0.05));
        assert_eq!(p.slope(0.9), 0.6);
    }

    #[test]
    fn c1_at_knots() {
        let p = build_smoothing(0.75, 2.0, 0.2).unwrap();
        for &k in &p.knots {
            let h = 1e-9;
            assert!((p.value(k + h) - p.value(k - h)).abs() < 1e-8);
            assert!((p.slope(k + h) - p.slope(k - h)).abs() < 1e-8);
        }
    }

    #[test]
    fn slope_ratio_bounds() {
        assert_eq!(build_smoothing(1.0, 1.0, 0.01), Err(AnalysisError::SlopeRatio(1.0)));
        assert!(build_smoothing(0.0, 1.0, 0.01).is_err());
        assert!(build_smoothing(0.5, 1.0, 0.05).is_err());
        assert!(build_smoothing(0.999, 1.0, 1e-4).is_ok());
        assert!(matches!(
            build_smoothing(0.999, 1.0, 0.05),
            Err(AnalysisError::Eps { .. })
        ));
    }

    #[test]
    fn curvature_on_each_piece() {
        let p = build_smoothing(0.8, 1.0, 0.05).unwrap();
        assert_eq!(warped_curvature(&p, 0.01).unwrap(), 0.0);
        assert_eq!(warped_curvature(&p, 0.7).unwrap(), 0.0);
        let mid = p.r_star;
        assert_relative_eq!(
            warped_curvature(&p, mid).unwrap(),
            (1.0 - 0.8) / (2.0 * p.half_width) / p.value(mid),
            max_relative = 1e-8
        );
        assert!(matches!(
            warped_curvature(&p, p.knots[0]),
            Err(AnalysisError::AtKnot { .. })
        ));
        assert!(warped_curvature(&p, 0.96).is_err());
    }

    proptest! {
        #[test]
        fn concave_and_nonnegatively_curved(t in 0.501f64..0.999, r0 in 0.1f64..10.0, frac in 0.01f64..0.99) {
            let p = build_smoothing(t, r0, frac * max_smoothing_eps(t, r0)).unwrap();
            let end = p.domain_end();
            for i in 1..400 {
                let r = end * i as f64 / 400.0;
                prop_assert!(p.second_fd(r) <= 1e-8);
                if p.knots.iter().all(|k| (r - k).abs() >= 1e-6) {
                    prop_assert!(warped_curvature(&p, r).unwrap() >= -1e-8);
                }
            }
            let (_, peak) = p.peak_curvature();
            prop_assert!(peak >= 1e-3 * (1.0 - t) / r0);
        }
    }
}

//! Finite metric samples with radius functions and volume oracles.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CoveringError;

const METRIC_TOL: f64 = 1e-9;

/// Volume of `B(center, r)` for sample centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VolumeModel {
    /// `4πr³/3`.
    Euclidean,
    /// `π(sinh 2r − 2r)`.
    Hyperbolic,
    /// `weight` times the number of samples at distance `< r`.
    Counting { weight: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpace {
    n: usize,
    distances: Vec<f64>,
    pub radii: Vec<f64>,
    pub volume: VolumeModel,
    /// Singular component label of each point, if marked.
    pub singular: Vec<Option<u32>>,
    pub anchor: Vec<usize>,
}

/// `π(sinh 2r − 2r)`, by series for small `r`.
pub fn hyperbolic_ball(r: f64) -> f64 {
    let x = 2.0 * r;
    if x < 1e-2 {
        let x3 = x * x * x;
        PI * x3 * (1.0 / 6.0 + x * x / 120.0 + x.powi(4) / 5040.0)
    } else {
        PI * (x.sinh() - x)
    }
}

impl SampledSpace {
    /// Validates symmetry, zero diagonal and the triangle inequality to 1e-9.
    pub fn new(distances: Vec<Vec<f64>>, radii: Vec<f64>, volume: VolumeModel) -> Result<Self, CoveringError> {
        let n = distances.len();
        if distances.iter().any(|row| row.len() != n) {
            return Err(CoveringError::Field {
                field: "distances",
                message: "matrix is not square".into(),
            });
        }
        let flat: Vec<f64> = distances.into_iter().flatten().collect();
        let space = Self::from_flat(n, flat, radii, volume)?;
        space.check_metric()?;
        Ok(space)
    }

    /// Skips the cubic triangle-inequality check, for generated metrics.
    pub(crate) fn from_flat(
        n: usize,
        distances: Vec<f64>,
        radii: Vec<f64>,
        volume: VolumeModel,
    ) -> Result<Self, CoveringError> {
        if radii.len() != n {
            return Err(CoveringError::Field {
                field: "radii",
                message: format!("expected {n} radii, got {}", radii.len()),
            });
        }
        if let Some((i, r)) = radii.iter().enumerate().find(|(_, r)| !(**r > 0.0 && **r <= 1.0)) {
            return Err(CoveringError::Field {
                field: "radii",
                message: format!("radius {r} at point {i} is outside (0, 1]"),
            });
        }
        if let VolumeModel::Counting { weight } = volume {
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(CoveringError::Field {
                    field: "volume",
                    message: "counting weight must be positive".into(),
                });
            }
        }
        Ok(SampledSpace {
            n,
            distances,
            radii,
            volume,
            singular: vec![None; n],
            anchor: Vec::new(),
        })
    }

    fn check_metric(&self) -> Result<(), CoveringError> {
        let bad = |message: String| CoveringError::Field {
            field: "distances",
            message,
        };
        for i in 0..self.n {
            if self.d(i, i).abs() > METRIC_TOL {
                return Err(bad(format!("nonzero diagonal at {i}")));
            }
            for j in 0..self.n {
                let dij = self.d(i, j);
                if !dij.is_finite() || dij < 0.0 {
                    return Err(bad(format!("invalid distance at ({i}, {j})")));
                }
                if (dij - self.d(j, i)).abs() > METRIC_TOL {
                    return Err(bad(format!("asymmetric at ({i}, {j})")));
                }
                for k in 0..self.n {
                    if dij > self.d(i, k) + self.d(k, j) + METRIC_TOL {
                        return Err(bad(format!("triangle inequality fails for ({i}, {k}, {j})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Marks points with singular component labels.
    pub fn with_singular(mut self, marks: &[(usize, u32)]) -> Result<Self, CoveringError> {
        for &(p, c) in marks {
            if p >= self.n {
                return Err(CoveringError::Field {
                    field: "singular",
                    message: format!("point {p} out of range"),
                });
            }
            self.singular[p] = Some(c);
        }
        Ok(self)
    }

    pub fn with_anchor(mut self, anchor: Vec<usize>) -> Result<Self, CoveringError> {
        if let Some(p) = anchor.iter().find(|&&p| p >= self.n) {
            return Err(CoveringError::Field {
                field: "anchor",
                message: format!("point {p} out of range"),
            });
        }
        self.anchor = anchor;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.distances[i * self.n + j]
    }

    /// Volume oracle for `B(center, r)`.
    pub fn ball_volume(&self, center: usize, r: f64) -> f64 {
        match self.volume {
            VolumeModel::Euclidean => 4.0 / 3.0 * PI * r.powi(3),
            VolumeModel::Hyperbolic => hyperbolic_ball(r),
            VolumeModel::Counting { weight } => weight * (0..self.n).filter(|&q| self.d(center, q) < r).count() as f64,
        }
    }

    /// Marked points grouped by component label, in label order.
    pub fn singular_components(&self) -> Vec<(u32, Vec<usize>)> {
        let mut labels: Vec<u32> = self.singular.iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        labels
            .into_iter()
            .map(|c| {
                let pts = (0..self.n).filter(|&p| self.singular[p] == Some(c)).collect();
                (c, pts)
            })
            .collect()
    }
}

/// `per_side³` grid points on the flat 3-torus `(ℝ/side)³` with constant radius.
pub fn flat_torus_grid(per_side: usize, side: f64, radius: f64) -> Result<SampledSpace, CoveringError> {
    if per_side == 0 || !(side > 0.0 && side.is_finite()) {
        return Err(CoveringError::Field {
            field: "generator",
            message: "per_side and side must be positive".into(),
        });
    }
    let n = per_side.pow(3);
    let step = side / per_side as f64;
    let coords: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            let (a, b, c) = (i / (per_side * per_side), (i / per_side) % per_side, i % per_side);
            [a as f64 * step, b as f64 * step, c as f64 * step]
        })
        .collect();
    let mut distances = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..3 {
                let t = (coords[i][k] - coords[j][k]).abs();
                let t = t.min(side - t);
                s += t * t;
            }
            distances[i * n + j] = s.sqrt();
        }
    }
    SampledSpace::from_flat(n, distances, vec![radius; n], VolumeModel::Euclidean)
}

/// A deterministic permutation of `0..n`.
pub fn seeded_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Serializable description of a sample space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    #[serde(default)]
    pub generator: Option<Generator>,
    #[serde(default)]
    pub distances: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
    #[serde(default = "default_volume")]
    pub volume: VolumeModel,
    #[serde(default)]
    pub singular: Vec<SingularMark>,
    #[serde(default)]
    pub anchor: Vec<usize>,
}

fn default_volume() -> VolumeModel {
    VolumeModel::Euclidean
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Generator {
    FlatTorusGrid { per_side: usize, side: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularMark {
    pub point: usize,
    pub component: u32,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<SampledSpace, CoveringError> {
        let mut space = match (&self.generator, &self.distances) {
            (Some(Generator::FlatTorusGrid { per_side, side }), None) => {
                let mut s = flat_torus_grid(*per_side, *side, 1.0)?;
                s.volume = self.volume;
                s
            }
            (None, Some(d)) => {
                let n = d.len();
                SampledSpace::new(d.clone(), vec![1.0; n], self.volume)?
            }
            _ => {
                return Err(CoveringError::Field {
                    field: "generator",
                    message: "give exactly one of generator or distances".into(),
                })
            }
        };
        let radii = match (&self.radius, &self.radii) {
            (Some(r), None) => vec![*r; space.len()],
            (None, Some(r)) => r.clone(),
            _ => {
                return Err(CoveringError::Field {
                    field: "radius",
                    message: "give exactly one of radius or radii".into(),
                })
            }
        };
        space = SampledSpace::from_flat(space.n, space.distances, radii, space.volume)?;
        let marks: Vec<(usize, u32)> = self.singular.iter().map(|m| (m.point, m.component)).collect();
        space.with_singular(&marks)?.with_anchor(self.anchor.clone())
    }
}

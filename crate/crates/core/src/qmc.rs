//! Randomised quasi-Monte Carlo integration over the unit cube.
//!
//! Points come from Owen-scrambled Sobol sequences. Independent scrambles
//! give replicate estimates whose spread yields a standard error. Work is
//! split into fixed blocks whose partial sums are combined in block order,
//! so results do not depend on the number of worker threads.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const BLOCK: u32 = 4096;

/// Largest number of points a single scrambled sequence provides.
pub const MAX_POINTS_PER_REPLICATE: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmcConfig {
    pub replicates: u32,
    pub points_per_replicate: u32,
    pub seed: u32,
}

impl Default for QmcConfig {
    /// Four scrambles of `2¹⁶` points, `2¹⁸` in total.
    fn default() -> Self {
        QmcConfig {
            replicates: 4,
            points_per_replicate: MAX_POINTS_PER_REPLICATE,
            seed: 0,
        }
    }
}

impl QmcConfig {
    pub fn total_points(&self) -> u64 {
        self.replicates as u64 * self.points_per_replicate as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Point `index` of scramble `seed`, four coordinates in `[0, 1)`.
pub fn sobol4(index: u32, seed: u32) -> [f64; 4] {
    let p = sobol_burley::sample_4d(index, 0, seed);
    [p[0] as f64, p[1] as f64, p[2] as f64, p[3] as f64]
}

/// Uniform direction on the unit sphere from two cube coordinates.
pub fn sphere_direction(u: f64, v: f64) -> Vector3<f64> {
    let z = 1.0 - 2.0 * u;
    let rho = (1.0 - z * z).max(0.0).sqrt();
    let phi = std::f64::consts::TAU * v;
    Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
}

/// Estimates the means of `outputs` integrands evaluated together.
///
/// `f(point, acc)` must add its integrand values into `acc`.
pub fn replicated_means<F>(cfg: &QmcConfig, outputs: usize, f: F) -> Vec<Estimate>
where
    F: Fn([f64; 4], &mut [f64]) + Sync,
{
    assert!(cfg.replicates >= 1);
    assert!(cfg.points_per_replicate >= 1 && cfg.points_per_replicate <= MAX_POINTS_PER_REPLICATE);
    let n = cfg.points_per_replicate;
    let blocks = n.div_ceil(BLOCK);

    let replicate_means: Vec<Vec<f64>> = (0..cfg.replicates)
        .map(|rep| {
            let seed = cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(rep);
            let partial: Vec<Vec<f64>> = (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let mut acc = vec![0.0; outputs];
                    for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                        f(sobol4(i, seed), &mut acc);
                    }
                    acc
                })
                .collect();
            let mut total = vec![0.0; outputs];
            for block in &partial {
                for (t, v) in total.iter_mut().zip(block) {
                    *t += v;
                }
            }
            total.iter().map(|t| t / n as f64).collect()
        })
        .collect();

    let reps = cfg.replicates as f64;
    (0..outputs)
        .map(|j| {
            let mean = replicate_means.iter().map(|m| m[j]).sum::<f64>() / reps;
            let std_error = if cfg.replicates > 1 {
                let var = replicate_means.iter().map(|m| (m[j] - mean).powi(2)).sum::<f64>() / (reps - 1.0);
                (var / reps).sqrt()
            } else {
                0.0
            };
            Estimate { mean, std_error }
        })
        .collect()
}

pub fn replicated_mean<F>(cfg: &QmcConfig, f: F) -> Estimate
where
    F: Fn([f64; 4]) -> f64 + Sync,
{
    replicated_means(cfg, 1, |p, acc| acc[0] += f(p))[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial() {
        let cfg = QmcConfig {
            replicates: 4,
            points_per_replicate: 1 << 12,
            seed: 7,
        };
        let e = replicated_mean(&cfg, |p| p[0] * p[1] + p[2] * p[2]);
        assert!((e.mean - (0.25 + 1.0 / 3.0)).abs() < 1e-4);
        assert!(e.std_error < 1e-3);
    }

    #[test]
    fn deterministic_in_seed() {
        let cfg = QmcConfig {
            replicates: 2,
            points_per_replicate: 5000,
            seed: 3,
        };
        let a = replicated_mean(&cfg, |p| p[3].sin());
        let b = replicated_mean(&cfg, |p| p[3].sin());
        assert_eq!(a, b);
    }

    #[test]
    fn directions_are_unit() {
        for i in 0..100 {
            let p = sobol4(i, 1);
            assert!((sphere_direction(p[0], p[1]).norm() - 1.0).abs() < 1e-12);
        }
    }
}

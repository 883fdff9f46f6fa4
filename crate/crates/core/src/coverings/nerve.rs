//! Nerve complexes, the partition-of-unity map into the nerve and radial
//! retraction onto a skeleton.

use std::collections::{BTreeMap, BTreeSet};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::constants::xi;
use super::cover::Covering;
use super::space::SampledSpace;
use super::CoveringError;

/// Simplicial complex stored by its maximal simplices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveComplex {
    pub vertex_count: usize,
    /// Maximal simplices as sorted vertex lists.
    pub facets: Vec<Vec<usize>>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

impl NerveComplex {
    /// Keeps only maximal simplices of the given family.
    pub fn from_simplices(vertex_count: usize, simplices: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if !s.is_empty() {
                all.insert(s);
            }
        }
        let mut by_size: Vec<Vec<usize>> = all.into_iter().collect();
        by_size.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for s in by_size {
            if !facets.iter().any(|f| f.len() > s.len() && is_subset(&s, f)) {
                facets.push(s);
            }
        }
        facets.sort();
        NerveComplex { vertex_count, facets }
    }

    /// `−1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn contains_simplex(&self, s: &[usize]) -> bool {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        self.facets.iter().any(|f| is_subset(&s, f))
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for (a, &u) in f.iter().enumerate() {
                for &v in &f[a + 1..] {
                    out.insert((u, v));
                }
            }
        }
        out
    }

    /// For each vertex, itself and its neighbours.
    pub fn closed_neighbourhoods(&self) -> Vec<BTreeSet<usize>> {
        let mut nb: Vec<BTreeSet<usize>> = (0..self.vertex_count).map(|v| BTreeSet::from([v])).collect();
        for (u, v) in self.edges() {
            nb[u].insert(v);
            nb[v].insert(u);
        }
        nb
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph nerve {\n");
        let mut used = BTreeSet::new();
        for f in &self.facets {
            used.extend(f.iter().copied());
        }
        for v in used {
            s.push_str(&format!("  v{v};\n"));
        }
        for (u, v) in self.edges() {
            s.push_str(&format!("  v{u} -- v{v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Čech nerve on the sample: a simplex for each family of sets sharing a
/// sample point.
pub fn nerve(c: &Covering) -> NerveComplex {
    let nonempty = (0..c.len()).filter(|&i| !c.members[i].is_empty()).map(|i| vec![i]);
    let shared = c
        .memberships
        .iter()
        .map(|sets| sets.iter().map(|(s, _)| *s).collect::<Vec<_>>());
    NerveComplex::from_simplices(c.len(), nonempty.chain(shared))
}

/// `C¹` ramp with `φ = 0` on `(−∞, 0]`, `φ = 1` on `[1/3, ∞)`, `|φ'| ≤ 4`.
///
/// `φ'` is a trapezoid: rises to 4 on `[0, 1/12]`, stays 4 on `[1/12, 1/4]`
/// and falls to 0 on `[1/4, 1/3]`.
pub fn bump(t: f64) -> f64 {
    const A: f64 = 1.0 / 12.0;
    const B: f64 = 0.25;
    const C: f64 = 1.0 / 3.0;
    if t <= 0.0 {
        0.0
    } else if t <= A {
        24.0 * t * t
    } else if t <= B {
        1.0 / 6.0 + 4.0 * (t - A)
    } else if t < C {
        1.0 - 24.0 * (C - t) * (C - t)
    } else {
        1.0
    }
}

pub fn bump_derivative(t: f64) -> f64 {
    const A: f64 = 1.0 / 12.0;
    const B: f64 = 0.25;
    const C: f64 = 1.0 / 3.0;
    if t <= 0.0 || t >= C {
        0.0
    } else if t <= A {
        48.0 * t
    } else if t <= B {
        4.0
    } else {
        48.0 * (C - t)
    }
}

/// Sparse point of the standard simplex: `(vertex, weight)` by vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Barycentric {
    pub coords: Vec<(usize, f64)>,
}

impl Barycentric {
    pub fn vertex(v: usize) -> Self {
        Barycentric { coords: vec![(v, 1.0)] }
    }

    pub fn support(&self) -> Vec<usize> {
        self.coords.iter().map(|(v, _)| *v).collect()
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.coords.iter().find(|(u, _)| *u == v).map_or(0.0, |(_, w)| *w)
    }

    /// Euclidean distance in `ℝ^p`.
    pub fn distance(&self, other: &Barycentric) -> f64 {
        let mut keys: Vec<usize> = self.support();
        keys.extend(other.support());
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|&v| (self.weight(v) - other.weight(v)).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// `f(p) = (φ(d(p, ∂V_i)/r_i))_i / Σ φ`.
pub fn partition_map(c: &Covering, p: usize) -> Result<Barycentric, CoveringError> {
    let phis: Vec<(usize, f64)> = c.memberships[p]
        .iter()
        .map(|&(i, depth)| (i, bump(depth / c.radii[i])))
        .filter(|(_, w)| *w > 0.0)
        .collect();
    let total: f64 = phis.iter().map(|(_, w)| w).sum();
    if total < 1.0 {
        return Err(CoveringError::ShallowPoint { point: p, total });
    }
    Ok(Barycentric {
        coords: phis.into_iter().map(|(i, w)| (i, w / total)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub k: usize,
    pub xi_k: f64,
    pub pairs: usize,
    /// Largest `|f(p) − f(q)| / d(p, q)` divided by `ξ_k / r_i`.
    pub worst_ratio: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Samples pairs inside `∪_{V_j ∩ V_i ≠ ∅} V_j` for random `i` and compares
/// the difference quotient of `f` with `ξ_k / r_i`, `k` the nerve dimension.
pub fn lipschitz_audit(
    space: &SampledSpace,
    c: &Covering,
    nerve: &NerveComplex,
    mapped: &[Barycentric],
    pairs: usize,
    seed: u64,
) -> LipschitzReport {
    let k = nerve.dimension().max(0) as usize;
    let xi_k = xi(k);
    let tolerance = 1.05;
    let neighbourhoods = nerve.closed_neighbourhoods();
    let regions: Vec<Vec<usize>> = (0..c.len())
        .map(|i| {
            let mut pts: Vec<usize> = neighbourhoods[i]
                .iter()
                .flat_map(|&j| c.members[j].iter().map(|(p, _)| *p))
                .collect();
            pts.sort_unstable();
            pts.dedup();
            pts
        })
        .collect();
    let usable: Vec<usize> = (0..c.len()).filter(|&i| regions[i].len() >= 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    if !usable.is_empty() {
        while done < pairs {
            let i = usable[rng.random_range(0..usable.len())];
            let reg = &regions[i];
            let p = reg[rng.random_range(0..reg.len())];
            let q = reg[rng.random_range(0..reg.len())];
            let d = space.d(p, q);
            if p == q || d <= 0.0 {
                continue;
            }
            let ratio = mapped[p].distance(&mapped[q]) / d;
            worst = worst.max(ratio / (xi_k / c.radii[i]));
            done += 1;
        }
    }
    LipschitzReport {
        k,
        xi_k,
        pairs: done,
        worst_ratio: worst,
        tolerance,
        passed: worst <= tolerance,
    }
}

/// Number of (point, vertex) incidences where `p` is in the open star of
/// `v` but outside every `V_j` meeting `V_v`.
pub fn star_preimage_violations(c: &Covering, nerve: &NerveComplex, mapped: &[Barycentric]) -> usize {
    let nb = nerve.closed_neighbourhoods();
    let mut bad = 0;
    for (p, f) in mapped.iter().enumerate() {
        for (v, w) in &f.coords {
            if *w > 0.0 && !c.memberships[p].iter().any(|(j, _)| nb[*v].contains(j)) {
                bad += 1;
            }
        }
    }
    bad
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetractionConfig {
    /// Barycentric lattice mesh for gap search.
    pub mesh: u32,
    /// Smallest accepted distance from a gap point to the samples (`ε_k`).
    pub min_gap: f64,
}

impl Default for RetractionConfig {
    fn default() -> Self {
        RetractionConfig {
            mesh: 16,
            min_gap: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetractionOutcome {
    pub points: Vec<Barycentric>,
    pub simplices_processed: usize,
    /// Smallest gap used over all processed simplices.
    pub smallest_gap: f64,
}

const MAX_LATTICE: u64 = 20_000;

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Interior points of the lattice `{w : w_v ∈ ℕ/mesh, Σ w = 1, w > 0}`,
/// or the barycenter and the midpoints towards each vertex if it is too
/// large or empty.
fn gap_candidates(parts: usize, mesh: u32) -> Vec<Vec<f64>> {
    let m = mesh as usize;
    if parts <= m && binomial(m as u64 - 1, parts as u64 - 1) <= MAX_LATTICE {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(parts);
        fn rec(left: usize, parts: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
            if parts == 1 {
                cur.push(left);
                out.push(cur.iter().map(|&c| c as f64 / m as f64).collect());
                cur.pop();
                return;
            }
            for c in 1..=left - (parts - 1) {
                cur.push(c);
                rec(left - c, parts - 1, m, cur, out);
                cur.pop();
            }
        }
        rec(m, parts, m, &mut cur, &mut out);
        out
    } else {
        let b = 1.0 / parts as f64;
        let mut out = vec![vec![b; parts]];
        for v in 0..parts {
            let mut w = vec![b / 2.0; parts];
            w[v] += 0.5;
            out.push(w);
        }
        out
    }
}

fn dense(f: &Barycentric, simplex: &[usize]) -> Vec<f64> {
    simplex.iter().map(|&v| f.weight(v)).collect()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Pushes samples off every simplex above `target_dim`, radially from a
/// gap point in each simplex, highest dimension first.
pub fn retract_to_skeleton(
    nerve: &NerveComplex,
    mapped: &[Barycentric],
    target_dim: usize,
    cfg: &RetractionConfig,
) -> Result<RetractionOutcome, CoveringError> {
    for (p, f) in mapped.iter().enumerate() {
        if !nerve.contains_simplex(&f.support()) {
            return Err(CoveringError::NotInNerve(p));
        }
    }
    let mut points = mapped.to_vec();
    let top = points.iter().map(|f| f.coords.len()).max().unwrap_or(0);
    let mut processed = 0;
    let mut smallest_gap = f64::INFINITY;
    for parts in (target_dim + 2..=top).rev() {
        let mut interiors: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (p, f) in points.iter().enumerate() {
            if f.coords.len() == parts {
                interiors.entry(f.support()).or_default().push(p);
            }
        }
        for (simplex, inside) in interiors {
            let closure: Vec<Vec<f64>> = points
                .iter()
                .filter(|f| is_subset(&f.support(), &simplex))
                .map(|f| dense(f, &simplex))
                .collect();
            let mut best: Option<(f64, Vec<f64>)> = None;
            for z in gap_candidates(parts, cfg.mesh) {
                let gap = closure.iter().map(|y| euclid(y, &z)).fold(f64::INFINITY, f64::min);
                if best.as_ref().is_none_or(|(g, _)| gap > *g) {
                    best = Some((gap, z));
                }
            }
            let (gap, z) = best.expect("candidate list is never empty");
            if !(gap >= cfg.min_gap) {
                return Err(CoveringError::NoGap {
                    simplex,
                    best_gap: gap,
                    samples: closure.len(),
                });
            }
            smallest_gap = smallest_gap.min(gap);
            processed += 1;
            for p in inside {
                let y = dense(&points[p], &simplex);
                let (mut s, mut hit) = (f64::INFINITY, 0);
                for v in 0..parts {
                    if y[v] < z[v] {
                        let t = z[v] / (z[v] - y[v]);
                        if t < s {
                            s = t;
                            hit = v;
                        }
                    }
                }
                let mut w: Vec<f64> = (0..parts).map(|v| (z[v] + s * (y[v] - z[v])).max(0.0)).collect();
                w[hit] = 0.0;
                let total: f64 = w.iter().sum();
                points[p] = Barycentric {
                    coords: simplex
                        .iter()
                        .zip(&w)
                        .filter(|(_, x)| **x > 0.0)
                        .map(|(v, x)| (*v, x / total))
                        .collect(),
                };
            }
        }
    }
    Ok(RetractionOutcome {
        points,
        simplices_processed: processed,
        smallest_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape() {
        assert_eq!(bump(-1.0), 0.0);
        assert_eq!(bump(1.0 / 3.0), 1.0);
        let mid = bump(1.0 / 6.0);
        assert!(mid > 0.0 && mid < 1.0);
        let mut max_slope: f64 = 0.0;
        for i in 0..100_000 {
            let t = -0.1 + 0.5 * i as f64 / 100_000.0;
            max_slope = max_slope.max(bump_derivative(t).abs());
        }
        assert!(max_slope <= 4.0);
    }

    #[test]
    fn bump_is_c1_at_knots() {
        for k in [0.0, 1.0 / 12.0, 0.25, 1.0 / 3.0] {
            let h = 1e-9;
            assert!((bump(k + h) - bump(k - h)).abs() < 1e-7);
            assert!((bump_derivative(k + h) - bump_derivative(k - h)).abs() < 1e-6);
            let fd = (bump(k + 1e-6) - bump(k - 1e-6)) / 2e-6;
            assert!((fd - bump_derivative(k)).abs() < 1e-4);
        }
    }

    #[test]
    fn maximal_simplices_only() {
        let n = NerveComplex::from_simplices(4, vec![vec![0, 1], vec![1, 0, 2], vec![3], vec![2]]);
        assert_eq!(n.facets, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(n.dimension(), 2);
        assert!(n.contains_simplex(&[2, 0]));
        assert!(!n.contains_simplex(&[2, 3]));
    }

    #[test]
    fn single_interior_sample_hits_boundary() {
        let nerve = NerveComplex::from_simplices(4, vec![vec![0, 1, 2, 3]]);
        let y = Barycentric {
            coords: vec![(0, 0.4), (1, 0.3), (2, 0.2), (3, 0.1)],
        };
        let out = retract_to_skeleton(&nerve, std::slice::from_ref(&y), 2, &RetractionConfig::default()).unwrap();
        let f = &out.points[0];
        assert!(f.coords.len() <= 3);
        let total: f64 = f.coords.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
        // the image lies on the ray from the gap point through y
        assert_eq!(out.simplices_processed, 1);
    }

    #[test]
    fn dense_simplex_has_no_gap() {
        let nerve = NerveComplex::from_simplices(4, vec![vec![0, 1, 2, 3]]);
        let fill: Vec<Barycentric> = gap_candidates(4, 16)
            .into_iter()
            .map(|w| Barycentric {
                coords: w.into_iter().enumerate().collect(),
            })
            .collect();
        let e = retract_to_skeleton(&nerve, &fill, 2, &RetractionConfig::default());
        assert!(matches!(e, Err(CoveringError::NoGap { .. })));
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(gap_candidates(4, 16).len() as u64, binomial(15, 3));
        assert_eq!(gap_candidates(20, 16).len(), 21);
    }
}

//! Pointed finite samples, ε-approximations, correspondence search and
//! bilipschitz distortion.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::AnalysisError;

const METRIC_TOL: f64 = 1e-9;
/// Largest sample handled by the exhaustive correspondence search.
pub const GH_MAX_POINTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointedSample {
    pub distances: Vec<Vec<f64>>,
    #[serde(default)]
    pub basepoint: usize,
    /// Indices of points on the singular locus.
    #[serde(default)]
    pub singular: Vec<usize>,
}

impl PointedSample {
    pub fn new(distances: Vec<Vec<f64>>, basepoint: usize) -> Result<Self, AnalysisError> {
        let s = PointedSample {
            distances,
            basepoint,
            singular: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    /// Points on a line at the given coordinates.
    pub fn on_line(coords: &[f64], basepoint: usize) -> Result<Self, AnalysisError> {
        let d = coords
            .iter()
            .map(|x| coords.iter().map(|y| (x - y).abs()).collect())
            .collect();
        Self::new(d, basepoint)
    }

    pub fn with_singular(mut self, marks: Vec<usize>) -> Result<Self, AnalysisError> {
        self.singular = marks;
        self.validate()?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.distances[i][j]
    }

    pub fn is_singular(&self, i: usize) -> bool {
        self.singular.contains(&i)
    }

    /// Metric axioms to 1e-9, basepoint and marks in range.
    pub fn validate(&self) -> Result<(), AnalysisError> {
        let n = self.len();
        let bad = |message: String| AnalysisError::Field {
            field: "distances",
            message,
        };
        if n == 0 {
            return Err(bad("empty sample".into()));
        }
        if self.distances.iter().any(|row| row.len() != n) {
            return Err(bad("matrix is not square".into()));
        }
        for i in 0..n {
            if self.d(i, i).abs() > METRIC_TOL {
                return Err(bad(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let dij = self.d(i, j);
                if !dij.is_finite() || dij < 0.0 || (dij - self.d(j, i)).abs() > METRIC_TOL {
                    return Err(bad(format!("invalid or asymmetric entry at ({i}, {j})")));
                }
                if i != j && dij == 0.0 {
                    return Err(bad(format!("points {i} and {j} coincide")));
                }
                for k in 0..n {
                    if dij > self.d(i, k) + self.d(k, j) + METRIC_TOL {
                        return Err(bad(format!("triangle inequality fails for ({i}, {k}, {j})")));
                    }
                }
            }
        }
        if self.basepoint >= n {
            return Err(AnalysisError::Field {
                field: "basepoint",
                message: format!("{} out of range", self.basepoint),
            });
        }
        if let Some(p) = self.singular.iter().find(|&&p| p >= n) {
            return Err(AnalysisError::Field {
                field: "singular",
                message: format!("point {p} out of range"),
            });
        }
        Ok(())
    }
}

/// Whether `d_union` on `X ⊔ Y` (points of `X` first) is an
/// `ε`-approximation between the pointed samples.
pub fn eps_approximation_check(
    x: &PointedSample,
    y: &PointedSample,
    d_union: &[Vec<f64>],
    eps: f64,
) -> Result<bool, AnalysisError> {
    let (nx, ny) = (x.len(), y.len());
    if d_union.len() != nx + ny || d_union.iter().any(|row| row.len() != nx + ny) {
        return Err(AnalysisError::Field {
            field: "union",
            message: format!("expected a {0}x{0} matrix", nx + ny),
        });
    }
    for i in 0..nx {
        for j in 0..nx {
            if (d_union[i][j] - x.d(i, j)).abs() > METRIC_TOL {
                return Err(AnalysisError::RestrictionMismatch("X"));
            }
        }
    }
    for i in 0..ny {
        for j in 0..ny {
            if (d_union[nx + i][nx + j] - y.d(i, j)).abs() > METRIC_TOL {
                return Err(AnalysisError::RestrictionMismatch("Y"));
            }
        }
    }
    let cross = |i: usize, j: usize| d_union[i][nx + j];
    let x_close = (0..nx).all(|i| (0..ny).any(|j| cross(i, j) <= eps));
    let y_close = (0..ny).all(|j| (0..nx).any(|i| cross(i, j) <= eps));
    Ok(x_close && y_close && cross(x.basepoint, y.basepoint) <= eps)
}

/// An optimal basepoint-preserving correspondence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhMatch {
    /// Half the distortion; the cross distance `dis/2` on related pairs
    /// makes an `ε`-approximation with this `ε`.
    pub value: f64,
    pub distortion: f64,
    pub correspondence: Vec<(usize, usize)>,
}

/// Candidate pairs for the chosen open point, with its index in `open_a`.
type Branching = (Vec<(usize, usize)>, Option<usize>);

struct Search<'a> {
    a: &'a PointedSample,
    b: &'a PointedSample,
    delta: f64,
}

impl Search<'_> {
    fn compatible(&self, p: (usize, usize), q: (usize, usize)) -> bool {
        (self.a.d(p.0, q.0) - self.b.d(p.1, q.1)).abs() <= self.delta
    }

    /// Picks one partner for every `a`, then one for every uncovered `b`.
    /// Every correspondence contains such a sub-relation, so the search is
    /// complete.
    fn run(&self) -> Option<Vec<(usize, usize)>> {
        let start = (self.a.basepoint, self.b.basepoint);
        let mut chosen = vec![start];
        let mut covered_b = vec![false; self.b.len()];
        covered_b[start.1] = true;
        let mut open_a: Vec<usize> = (0..self.a.len()).filter(|&i| i != start.0).collect();
        self.extend(&mut chosen, &mut open_a, &mut covered_b).then_some(chosen)
    }

    fn candidates(&self, chosen: &[(usize, usize)], a: Option<usize>, b: Option<usize>) -> Vec<(usize, usize)> {
        let pairs: Vec<(usize, usize)> = match (a, b) {
            (Some(i), _) => (0..self.b.len()).map(|j| (i, j)).collect(),
            (_, Some(j)) => (0..self.a.len()).map(|i| (i, j)).collect(),
            _ => unreachable!(),
        };
        pairs
            .into_iter()
            .filter(|&p| chosen.iter().all(|&q| self.compatible(p, q)))
            .collect()
    }

    fn extend(&self, chosen: &mut Vec<(usize, usize)>, open_a: &mut Vec<usize>, covered_b: &mut Vec<bool>) -> bool {
        // most constrained open point first
        let mut best: Option<Branching> = None;
        for (k, &i) in open_a.iter().enumerate() {
            let c = self.candidates(chosen, Some(i), None);
            if best.as_ref().is_none_or(|(bc, _)| c.len() < bc.len()) {
                best = Some((c, Some(k)));
            }
        }
        if open_a.is_empty() {
            for j in (0..self.b.len()).filter(|&j| !covered_b[j]) {
                let c = self.candidates(chosen, None, Some(j));
                if best.as_ref().is_none_or(|(bc, _)| c.len() < bc.len()) {
                    best = Some((c, None));
                }
            }
        }
        let Some((cands, slot)) = best else {
            return true;
        };
        let removed = slot.map(|k| open_a.remove(k));
        for p in cands {
            let newly = !covered_b[p.1];
            covered_b[p.1] = true;
            chosen.push(p);
            if self.extend(chosen, open_a, covered_b) {
                return true;
            }
            chosen.pop();
            if newly {
                covered_b[p.1] = false;
            }
        }
        if let (Some(k), Some(i)) = (slot, removed) {
            open_a.insert(k, i);
        }
        false
    }
}

/// Exhaustive minimum of `dis(R)/2` over correspondences `R` relating the
/// basepoints.
pub fn gh_correspondence(a: &PointedSample, b: &PointedSample) -> Result<GhMatch, AnalysisError> {
    for s in [a, b] {
        s.validate()?;
        if s.len() > GH_MAX_POINTS {
            return Err(AnalysisError::TooLarge(s.len()));
        }
    }
    let mut levels = vec![0.0];
    for i in 0..a.len() {
        for i2 in i + 1..a.len() {
            for j in 0..b.len() {
                for j2 in 0..b.len() {
                    levels.push((a.d(i, i2) - b.d(j, j2)).abs());
                }
            }
        }
    }
    for j in 0..b.len() {
        for j2 in j + 1..b.len() {
            levels.push(b.d(j, j2));
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let feasible = |delta: f64| Search { a, b, delta }.run();
    let (mut lo, mut hi) = (0, levels.len() - 1);
    let mut best = feasible(levels[hi]).expect("the full relation is a correspondence");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(levels[mid]) {
            Some(r) => {
                best = r;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let mut correspondence = best;
    correspondence.sort_unstable();
    let distortion = distortion_of(a, b, &correspondence);
    Ok(GhMatch {
        value: distortion / 2.0,
        distortion,
        correspondence,
    })
}

fn distortion_of(a: &PointedSample, b: &PointedSample, r: &[(usize, usize)]) -> f64 {
    let mut dis: f64 = 0.0;
    for &(i, j) in r {
        for &(i2, j2) in r {
            dis = dis.max((a.d(i, i2) - b.d(j, j2)).abs());
        }
    }
    dis
}

/// Upper bound for the pointed Hausdorff–Gromov distance.
pub fn gh_distance_upper(a: &PointedSample, b: &PointedSample) -> Result<f64, AnalysisError> {
    Ok(gh_correspondence(a, b)?.value)
}

/// Smallest `L ≥ 1` with `d_A/L ≤ d_B ≤ L d_A` over the pairs; infinite
/// if two points collapse.
pub fn bilipschitz_distortion(
    a: &PointedSample,
    b: &PointedSample,
    pairs: &[(usize, usize)],
) -> Result<f64, AnalysisError> {
    let mut map: HashMap<usize, usize> = HashMap::new();
    for &(i, j) in pairs {
        if i >= a.len() || j >= b.len() {
            return Err(AnalysisError::Field {
                field: "maps",
                message: format!("pair ({i}, {j}) out of range"),
            });
        }
        if *map.entry(i).or_insert(j) != j {
            return Err(AnalysisError::ConflictingTargets(i));
        }
    }
    let mut pts: Vec<(usize, usize)> = map.into_iter().collect();
    pts.sort_unstable();
    let mut worst: f64 = 1.0;
    for (k, &(i, j)) in pts.iter().enumerate() {
        for &(i2, j2) in &pts[k + 1..] {
            let (da, db) = (a.d(i, i2), b.d(j, j2));
            if db == 0.0 {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(db / da).max(da / db);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermReport {
    pub term: usize,
    /// `d(f_n(x_∞), x_n)`.
    pub basepoint_offset: f64,
    pub basepoint_ok: bool,
    /// Sample points of `B(x_n, R − ε)` missing from `f_n(B(x_∞, R))`.
    pub uncovered: Vec<usize>,
    pub ball_ok: bool,
    /// Ball points where exactly one of `p`, `f_n(p)` is marked singular.
    pub mark_mismatches: Vec<usize>,
    pub marks_ok: bool,
    pub distortion: f64,
    pub distortion_ok: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub radius: f64,
    pub eps: f64,
    /// Ball containment is only tested at sampled points of each term.
    pub containment_basis: &'static str,
    pub terms: Vec<TermReport>,
    pub passed: bool,
}

/// Checks basepoint proximity, ball containment, singular correspondence
/// and `(1+ε)`-bilipschitz distortion for each term with its map from the
/// `R`-ball of the limit.
pub fn geometric_convergence_check(
    seq: &[PointedSample],
    limit: &PointedSample,
    radius: f64,
    eps: f64,
    maps: &[Vec<(usize, usize)>],
) -> Result<ConvergenceReport, AnalysisError> {
    if seq.len() != maps.len() {
        return Err(AnalysisError::Field {
            field: "maps",
            message: format!("{} terms but {} maps", seq.len(), maps.len()),
        });
    }
    if !(radius > 0.0 && eps > 0.0) {
        return Err(AnalysisError::Field {
            field: "eps",
            message: "R and eps must be positive".into(),
        });
    }
    limit.validate()?;
    let ball: Vec<usize> = (0..limit.len())
        .filter(|&p| limit.d(limit.basepoint, p) < radius)
        .collect();
    let mut terms = Vec::with_capacity(seq.len());
    for (n, (term, pairs)) in seq.iter().zip(maps).enumerate() {
        term.validate()?;
        let mut f: HashMap<usize, usize> = HashMap::new();
        for &(p, q) in pairs {
            if *f.entry(p).or_insert(q) != q {
                return Err(AnalysisError::ConflictingTargets(p));
            }
        }
        let image = |p: usize| {
            f.get(&p)
                .copied()
                .ok_or(AnalysisError::MapUndefined { term: n, point: p })
        };
        let images = ball.iter().map(|&p| image(p)).collect::<Result<Vec<_>, _>>()?;
        let basepoint_offset = term.d(image(limit.basepoint)?, term.basepoint);
        let uncovered: Vec<usize> = (0..term.len())
            .filter(|&q| term.d(term.basepoint, q) < radius - eps && !images.contains(&q))
            .collect();
        let mark_mismatches: Vec<usize> = ball
            .iter()
            .zip(&images)
            .filter(|(&p, &q)| limit.is_singular(p) != term.is_singular(q))
            .map(|(&p, _)| p)
            .collect();
        let restricted: Vec<(usize, usize)> = ball.iter().copied().zip(images.iter().copied()).collect();
        let distortion = bilipschitz_distortion(limit, term, &restricted)?;
        let basepoint_ok = basepoint_offset < eps;
        let ball_ok = uncovered.is_empty();
        let marks_ok = mark_mismatches.is_empty();
        let distortion_ok = distortion <= 1.0 + eps;
        terms.push(TermReport {
            term: n,
            basepoint_offset,
            basepoint_ok,
            uncovered,
            ball_ok,
            mark_mismatches,
            marks_ok,
            distortion,
            distortion_ok,
            passed: basepoint_ok && ball_ok && marks_ok && distortion_ok,
        });
    }
    Ok(ConvergenceReport {
        radius,
        eps,
        containment_basis: "sampled points of each term",
        passed: terms.iter().all(|t| t.passed),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn union_two_point(shift: f64) -> Vec<Vec<f64>> {
        // X = {0, 1}, Y = {0, 1.2} with matched points `shift` apart
        let x = [0.0f64, 1.0];
        let y = [0.0f64, 1.2];
        let mut d = vec![vec![0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                d[i][j] = (x[i] - x[j]).abs();
                d[2 + i][2 + j] = (y[i] - y[j]).abs();
            }
        }
        d[0][2] = shift;
        d[1][3] = shift;
        d[0][3] = 1.2 + shift;
        d[1][2] = 1.0 + shift;
        for i in 0..2 {
            for j in 2..4 {
                d[j][i] = d[i][j];
            }
        }
        d
    }

    #[test]
    fn two_point_approximation() {
        let x = PointedSample::on_line(&[0.0, 1.0], 0).unwrap();
        let y = PointedSample::on_line(&[0.0, 1.2], 0).unwrap();
        let d = union_two_point(0.1);
        assert!(eps_approximation_check(&x, &y, &d, 0.15).unwrap());
        assert!(!eps_approximation_check(&x, &y, &d, 0.05).unwrap());
        let mut broken = d.clone();
        broken[0][1] = 0.9;
        assert_eq!(
            eps_approximation_check(&x, &y, &broken, 0.15),
            Err(AnalysisError::RestrictionMismatch("X"))
        );
    }

    #[test]
    fn glued_copy_is_zero_approximation() {
        let x = PointedSample::on_line(&[0.0, 0.4, 1.5], 1).unwrap();
        let n = x.len();
        let mut d = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..2 * n {
            for j in 0..2 * n {
                d[i][j] = x.d(i % n, j % n);
            }
        }
        assert!(eps_approximation_check(&x, &x, &d, 0.0).unwrap());
    }

    #[test]
    fn gh_two_point() {
        let a = PointedSample::on_line(&[0.0, 1.0], 0).unwrap();
        let b = PointedSample::on_line(&[0.0, 1.2], 0).unwrap();
        let m = gh_correspondence(&a, &b).unwrap();
        assert_relative_eq!(m.value, 0.1, epsilon = 1e-15);
        assert_eq!(m.correspondence, vec![(0, 0), (1, 1)]);
        assert_eq!(gh_distance_upper(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn gh_unequal_sizes() {
        let a = PointedSample::on_line(&[0.0], 0).unwrap();
        let b = PointedSample::on_line(&[0.0, 1.0], 0).unwrap();
        assert_eq!(gh_distance_upper(&a, &b).unwrap(), 0.5);
        assert_eq!(gh_distance_upper(&b, &a).unwrap(), 0.5);
    }

    #[test]
    fn gh_size_limit() {
        let big = PointedSample::on_line(&(0..13).map(f64::from).collect::<Vec<_>>(), 0).unwrap();
        assert_eq!(gh_distance_upper(&big, &big), Err(AnalysisError::TooLarge(13)));
    }

    #[test]
    fn distortion_cases() {
        let a = PointedSample::on_line(&[0.0, 1.0, 3.0], 0).unwrap();
        let b = PointedSample::on_line(&[0.0, 2.5, 7.5], 0).unwrap();
        let id = [(0, 0), (1, 1), (2, 2)];
        assert_eq!(bilipschitz_distortion(&a, &a, &id).unwrap(), 1.0);
        assert_relative_eq!(bilipschitz_distortion(&a, &b, &id).unwrap(), 2.5);
        assert_relative_eq!(bilipschitz_distortion(&b, &a, &id).unwrap(), 2.5);
        assert_eq!(
            bilipschitz_distortion(&a, &b, &[(0, 0), (1, 0)]).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            bilipschitz_distortion(&a, &b, &[(0, 0), (0, 1)]),
            Err(AnalysisError::ConflictingTargets(0))
        );
    }

    #[test]
    fn convergence_constant_and_dropped_mark() {
        let limit = PointedSample::on_line(&[0.0, 1.0, 2.0, 5.0], 0)
            .unwrap()
            .with_singular(vec![1])
            .unwrap();
        let id: Vec<(usize, usize)> = (0..4).map(|i| (i, i)).collect();
        let seq = vec![limit.clone(); 3];
        let ok = geometric_convergence_check(&seq, &limit, 3.0, 1e-3, &vec![id.clone(); 3]).unwrap();
        assert!(ok.passed);

        let mut seq = seq;
        seq[1].singular.clear();
        let r = geometric_convergence_check(&seq, &limit, 3.0, 1e-3, &vec![id.clone(); 3]).unwrap();
        assert!(!r.passed);
        assert!(r.terms[0].passed && r.terms[2].passed);
        assert!(!r.terms[1].marks_ok && r.terms[1].basepoint_ok && r.terms[1].ball_ok);
        assert_eq!(r.terms[1].mark_mismatches, vec![1]);

        let partial = vec![vec![(0, 0), (1, 1)]];
        assert_eq!(
            geometric_convergence_check(&seq[..1], &limit, 3.0, 1e-3, &partial),
            Err(AnalysisError::MapUndefined { term: 0, point: 2 })
        );
    }

    #[test]
    fn scaled_sequence_converges() {
        let coords = [0.0, 0.7, 1.5, 2.2];
        let limit = PointedSample::on_line(&coords, 0).unwrap();
        let id: Vec<(usize, usize)> = (0..4).map(|i| (i, i)).collect();
        let eps = 0.05;
        for n in [5usize, 10, 30] {
            let s = 1.0 + 1.0 / n as f64;
            let term = PointedSample::on_line(&coords.map(|x| x * s), 0).unwrap();
            let r = geometric_convergence_check(&[term], &limit, 3.0, eps, std::slice::from_ref(&id)).unwrap();
            assert_relative_eq!(r.terms[0].distortion, s, max_relative = 1e-12);
            assert_eq!(r.passed, n as f64 > 1.0 / eps, "n = {n}");
        }
    }
}

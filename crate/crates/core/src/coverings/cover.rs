//! Greedy packings, the open sets `V_i` and the five covering properties.

use serde::{Deserialize, Serialize};

use super::space::SampledSpace;
use super::CoveringError;

/// Centers in order with `B(x_i, r_i/4)` pairwise disjoint, maximal among
/// the sample. `mandatory` points come first and must already be disjoint.
pub fn greedy_maximal_packing(
    space: &SampledSpace,
    order: &[usize],
    mandatory: &[usize],
) -> Result<Vec<usize>, CoveringError> {
    let r = &space.radii;
    let separated = |a: usize, b: usize| space.d(a, b) >= (r[a] + r[b]) / 4.0;
    for (k, &a) in mandatory.iter().enumerate() {
        if a >= space.len() {
            return Err(CoveringError::Field {
                field: "mandatory",
                message: format!("point {a} out of range"),
            });
        }
        if let Some(&b) = mandatory[..k].iter().find(|&&b| !separated(a, b)) {
            return Err(CoveringError::MandatoryOverlap(b, a));
        }
    }
    let mut centers = mandatory.to_vec();
    let mut is_center = vec![false; space.len()];
    for &c in &centers {
        is_center[c] = true;
    }
    for &p in order {
        if !is_center[p] && centers.iter().all(|&c| separated(p, c)) {
            centers.push(p);
            is_center[p] = true;
        }
    }
    Ok(centers)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CoverMode {
    /// `V_i = B(x_i, r_i)`.
    Plain,
    /// `V_i = B(x_i, r_i) − N_μ(Σ)`, except that each component's tube stays
    /// in the set of its representative center.
    ExcludeSingularTubes { mu: f64 },
    /// `V_i = B(x_i, r_i) − W₀` for `i ≥ 1`; `V_0` keeps the anchor.
    ExcludeAnchor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Exclusion {
    Tube {
        component: u32,
        marks: Vec<usize>,
        mu: f64,
        owner: usize,
    },
    Anchor {
        points: Vec<usize>,
        owner: usize,
    },
}

impl Exclusion {
    fn owner(&self) -> usize {
        match self {
            Exclusion::Tube { owner, .. } | Exclusion::Anchor { owner, .. } => *owner,
        }
    }

    /// Distance from `p` to the excluded region, negative or zero inside it.
    fn clearance(&self, space: &SampledSpace, p: usize) -> f64 {
        match self {
            Exclusion::Tube { marks, mu, .. } => {
                marks.iter().map(|&m| space.d(p, m)).fold(f64::INFINITY, f64::min) - mu
            }
            Exclusion::Anchor { points, .. } => {
                if points.contains(&p) {
                    0.0
                } else {
                    points.iter().map(|&w| space.d(p, w)).fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    fn contains(&self, space: &SampledSpace, p: usize) -> bool {
        self.clearance(space, p) <= 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Covering {
    pub centers: Vec<usize>,
    pub radii: Vec<f64>,
    pub mode: CoverMode,
    pub exclusions: Vec<Exclusion>,
    /// Smallest `η` with `Vol(V_i) ≤ η r_i³` for all `i`.
    pub eta: f64,
    /// For each set, its sample points with `d(p, ∂V_i)`.
    #[serde(skip)]
    pub members: Vec<Vec<(usize, f64)>>,
    /// For each sample point, the sets containing it with depths.
    #[serde(skip)]
    pub memberships: Vec<Vec<(usize, f64)>>,
}

impl Covering {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// `d(p, ∂V_i)` if `p ∈ V_i`.
    pub fn depth(&self, set: usize, p: usize) -> Option<f64> {
        self.memberships[p].iter().find(|(s, _)| *s == set).map(|(_, d)| *d)
    }
}

fn sample_depth(space: &SampledSpace, center: usize, r: f64, set: usize, exclusions: &[Exclusion], p: usize) -> f64 {
    let mut depth = r - space.d(center, p);
    for e in exclusions {
        if e.owner() != set {
            depth = depth.min(e.clearance(space, p));
        }
    }
    depth
}

/// Builds the open sets for the given centers.
pub fn build_covering(space: &SampledSpace, centers: &[usize], mode: CoverMode) -> Result<Covering, CoveringError> {
    let radii: Vec<f64> = centers.iter().map(|&c| space.radii[c]).collect();
    let exclusions = match mode {
        CoverMode::Plain => Vec::new(),
        CoverMode::ExcludeSingularTubes { mu } => {
            let mut out = Vec::new();
            for (component, marks) in space.singular_components() {
                let owner = centers
                    .iter()
                    .position(|&c| space.singular[c] == Some(component))
                    .ok_or(CoveringError::NoRepresentative(component))?;
                let limit = radii[owner] / 18.0;
                if !(mu > 0.0 && mu <= limit) {
                    return Err(CoveringError::MuTooLarge { mu, limit });
                }
                let e = Exclusion::Tube {
                    component,
                    marks,
                    mu,
                    owner,
                };
                let inside = (0..space.len())
                    .filter(|&p| e.contains(space, p))
                    .all(|p| space.d(centers[owner], p) < radii[owner]);
                if !inside {
                    return Err(CoveringError::TubeOutsideBall(component));
                }
                out.push(e);
            }
            out
        }
        CoverMode::ExcludeAnchor => {
            if space.anchor.is_empty() {
                return Err(CoveringError::Field {
                    field: "anchor",
                    message: "anchor mode needs a nonempty anchor".into(),
                });
            }
            let Some(&x0) = centers.first() else {
                return Err(CoveringError::AnchorOutsideBall);
            };
            if space.anchor.iter().any(|&w| space.d(x0, w) >= radii[0] / 9.0) {
                return Err(CoveringError::AnchorOutsideBall);
            }
            vec![Exclusion::Anchor {
                points: space.anchor.clone(),
                owner: 0,
            }]
        }
    };

    let mut members = vec![Vec::new(); centers.len()];
    let mut memberships = vec![Vec::new(); space.len()];
    for (i, (&c, &r)) in centers.iter().zip(&radii).enumerate() {
        for p in 0..space.len() {
            let depth = sample_depth(space, c, r, i, &exclusions, p);
            if depth > 0.0 {
                members[i].push((p, depth));
                memberships[p].push((i, depth));
            }
        }
    }
    let eta = centers
        .iter()
        .zip(&radii)
        .map(|(&c, &r)| space.ball_volume(c, r) / r.powi(3))
        .fold(0.0, f64::max);
    Ok(Covering {
        centers: centers.to_vec(),
        radii,
        mode,
        exclusions,
        eta,
        members,
        memberships,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub passed: bool,
    pub violations: usize,
    /// Most extreme value of the checked quantity.
    pub worst: f64,
}

impl PropertyCheck {
    fn new(violations: usize, worst: f64) -> Self {
        PropertyCheck {
            passed: violations == 0,
            violations,
            worst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    /// `V_i ⊂ B(x_i, r_i)` and `r_i ≤ 1`; worst is the largest radius.
    pub containment: PropertyCheck,
    /// Intersecting balls have `3/4 ≤ r_i/r_j ≤ 4/3`; worst is the largest ratio.
    pub radius_ratio: PropertyCheck,
    /// Quarter-balls are disjoint; worst is the smallest `d/((r_i + r_j)/4)`.
    pub quarter_disjoint: PropertyCheck,
    /// Every point lies `r_i/3` deep in some `V_i`; worst is the smallest best depth ratio.
    pub deep_cover: PropertyCheck,
    /// `Vol(V_i) ≤ η r_i³`, against the target if one is given.
    pub volume: PropertyCheck,
    pub eta_min: f64,
    /// Each tube or anchor region lies in exactly one set.
    pub exclusive: Option<PropertyCheck>,
}

impl CoveringReport {
    pub fn all_pass(&self) -> bool {
        self.containment.passed
            && self.radius_ratio.passed
            && self.quarter_disjoint.passed
            && self.deep_cover.passed
            && self.volume.passed
            && self.exclusive.as_ref().is_none_or(|c| c.passed)
    }
}

/// Checks the covering properties on the sample. Volumes use the oracle
/// value of the whole ball, an upper bound for `Vol(V_i)`.
pub fn verify_covering(space: &SampledSpace, c: &Covering, eta_target: Option<f64>) -> CoveringReport {
    let m = c.len();
    let mut bad = 0;
    let mut worst: f64 = 0.0;
    for i in 0..m {
        worst = worst.max(c.radii[i]);
        if c.radii[i] > 1.0 {
            bad += 1;
        }
        bad += c.members[i]
            .iter()
            .filter(|(p, _)| space.d(c.centers[i], *p) >= c.radii[i])
            .count();
    }
    let containment = PropertyCheck::new(bad, worst);

    let (mut ratio_bad, mut ratio_worst) = (0, if m > 0 { 1.0 } else { 0.0 });
    let (mut quarter_bad, mut quarter_worst) = (0, f64::INFINITY);
    for i in 0..m {
        for j in i + 1..m {
            let d = space.d(c.centers[i], c.centers[j]);
            let (ri, rj) = (c.radii[i], c.radii[j]);
            if d < ri + rj {
                let q = (ri / rj).max(rj / ri);
                ratio_worst = f64::max(ratio_worst, q);
                if q > 4.0 / 3.0 + 1e-12 {
                    ratio_bad += 1;
                }
            }
            let s = d / ((ri + rj) / 4.0);
            quarter_worst = quarter_worst.min(s);
            if s < 1.0 {
                quarter_bad += 1;
            }
        }
    }

    let (mut deep_bad, mut deep_worst) = (0, f64::INFINITY);
    for sets in &c.memberships {
        let best = sets.iter().map(|&(i, depth)| depth / c.radii[i]).fold(0.0, f64::max);
        deep_worst = deep_worst.min(best);
        if best < 1.0 / 3.0 {
            deep_bad += 1;
        }
    }
    if space.is_empty() {
        deep_worst = 0.0;
    }

    let volume = match eta_target {
        Some(t) => PropertyCheck::new(usize::from(c.eta > t), c.eta),
        None => PropertyCheck::new(0, c.eta),
    };

    let exclusive = (!c.exclusions.is_empty()).then(|| {
        let mut bad = 0;
        for e in &c.exclusions {
            for p in (0..space.len()).filter(|&p| e.contains(space, p)) {
                let sets = &c.memberships[p];
                if sets.len() != 1 || sets[0].0 != e.owner() {
                    bad += 1;
                }
            }
        }
        PropertyCheck::new(bad, bad as f64)
    });

    CoveringReport {
        containment,
        radius_ratio: PropertyCheck::new(ratio_bad, ratio_worst),
        quarter_disjoint: PropertyCheck::new(quarter_bad, if m > 1 { quarter_worst } else { 0.0 }),
        deep_cover: PropertyCheck::new(deep_bad, deep_worst),
        volume,
        eta_min: c.eta,
        exclusive,
    }
}

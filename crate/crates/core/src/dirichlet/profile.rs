//! Volumes of star-shaped regions and Bishop–Gromov ratio profiles.
//!
//! Regions are finite unions of convex chart polyhedra. Volumes are
//! integrated along geodesic rays from a center, which is exact in the
//! radial variable and quasi-random over directions.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::isometry::{GeometryKind, Isometry, Point};
use super::polytope::{ConvexPolyhedron, Plane};
use super::DirichletError;
use crate::model_spaces::{ball_volume, ConeAngle, Curvature};
use crate::qmc::{replicated_means, sphere_direction, Estimate, QmcConfig};

/// A region given as a union of convex chart polyhedra.
pub trait StarRegion: Sync {
    fn geometry(&self) -> GeometryKind;

    fn pieces(&self) -> &[ConvexPolyhedron];

    fn contains(&self, p: &Vector3<f64>) -> bool {
        self.pieces().iter().any(|c| c.contains(p, 1e-12))
    }

    /// Chart parameter at which `origin + t·dir` first leaves the union.
    fn chart_ray_exit(&self, origin: &Vector3<f64>, dir: &Vector3<f64>) -> f64 {
        let mut t = 0.0;
        for _ in 0..64 {
            let p = origin + dir * t;
            let step = self
                .pieces()
                .iter()
                .filter(|c| c.contains(&p, 1e-12))
                .map(|c| c.ray_exit(&p, dir))
                .fold(0.0, f64::max);
            if !(step > 1e-13 * (1.0 + t)) || !step.is_finite() {
                return if step.is_finite() { t } else { f64::INFINITY };
            }
            t += step;
        }
        t
    }

    /// Geodesic length of the segment from `center` to the boundary, leaving
    /// in the unit tangent direction `dir` at `center`.
    fn extent_from(&self, center: &Vector3<f64>, dir: &Vector3<f64>) -> f64 {
        match self.geometry() {
            GeometryKind::Euclidean => self.chart_ray_exit(center, dir),
            GeometryKind::Lorentz => {
                let base = Point::from_klein(center);
                let Point::Hyperbolic(y) = base else { unreachable!() };
                let frame = Isometry::boost_to(&y);
                let ahead = frame.apply_chart(&(dir * 0.5));
                let v = (ahead - center).normalize();
                let t = self.chart_ray_exit(center, &v);
                let q = center + v * t;
                if !t.is_finite() || q.norm() >= 1.0 {
                    return f64::INFINITY;
                }
                base.distance(&Point::from_klein(&q)).unwrap_or(f64::INFINITY)
            }
        }
    }

    fn extent_from_origin(&self, dir: &Vector3<f64>) -> f64 {
        self.extent_from(&Vector3::zeros(), dir)
    }
}

impl StarRegion for ConvexPolyhedron {
    fn geometry(&self) -> GeometryKind {
        self.geometry
    }

    fn pieces(&self) -> &[ConvexPolyhedron] {
        std::slice::from_ref(self)
    }
}

/// A Euclidean polyhedron star-shaped about the origin: the icosahedron
/// with each vertex pushed to its own radius, cut into 20 tetrahedra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarPolyhedron {
    pub radii: Vec<f64>,
    pieces: Vec<ConvexPolyhedron>,
}

const ICOSA_FACES: [[usize; 3]; 20] = [
    [0, 11, 5],
    [0, 5, 1],
    [0, 1, 7],
    [0, 7, 10],
    [0, 10, 11],
    [1, 5, 9],
    [5, 11, 4],
    [11, 10, 2],
    [10, 7, 6],
    [7, 1, 8],
    [3, 9, 4],
    [3, 4, 2],
    [3, 2, 6],
    [3, 6, 8],
    [3, 8, 9],
    [4, 9, 5],
    [2, 4, 11],
    [6, 2, 10],
    [8, 6, 7],
    [9, 8, 1],
];

fn icosahedron() -> [Vector3<f64>; 12] {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    raw.map(|v| Vector3::new(v[0], v[1], v[2]).normalize())
}

impl StarPolyhedron {
    /// Requires twelve positive radii.
    pub fn new(radii: &[f64]) -> Result<Self, DirichletError> {
        if radii.len() != 12 || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(DirichletError::InvalidRegion("twelve positive radii required"));
        }
        let dirs = icosahedron();
        let verts: Vec<Vector3<f64>> = dirs.iter().zip(radii).map(|(d, r)| d * *r).collect();
        let half = 2.0 * radii.iter().cloned().fold(0.0, f64::max);
        let pieces = ICOSA_FACES
            .iter()
            .map(|&[a, b, c]| {
                let (pa, pb, pc) = (verts[a], verts[b], verts[c]);
                let mut outer = (pb - pa).cross(&(pc - pa));
                if outer.dot(&pa) < 0.0 {
                    outer = -outer;
                }
                let side = |p: Vector3<f64>, q: Vector3<f64>, opposite: Vector3<f64>| {
                    let mut n = p.cross(&q);
                    if n.dot(&opposite) > 0.0 {
                        n = -n;
                    }
                    Plane::new(n, 0.0)
                };
                let planes = [
                    Plane::new(outer, outer.dot(&pa)),
                    side(pa, pb, pc),
                    side(pb, pc, pa),
                    side(pc, pa, pb),
                ];
                ConvexPolyhedron::clip_box(GeometryKind::Euclidean, Vector3::zeros(), half, &planes)
            })
            .collect();
        Ok(StarPolyhedron {
            radii: radii.to_vec(),
            pieces,
        })
    }

    /// Exact volume, the sum of the tetrahedra.
    pub fn volume(&self) -> f64 {
        self.pieces.iter().map(|p| p.chart_volume()).sum()
    }
}

impl StarRegion for StarPolyhedron {
    fn geometry(&self) -> GeometryKind {
        GeometryKind::Euclidean
    }

    fn pieces(&self) -> &[ConvexPolyhedron] {
        &self.pieces
    }
}

fn curvature_of(kind: GeometryKind) -> Curvature {
    match kind {
        GeometryKind::Euclidean => Curvature::FLAT,
        GeometryKind::Lorentz => Curvature::HYPERBOLIC,
    }
}

/// `Vol(region ∩ B(center, cutoff))` for a region star-shaped at `center`.
pub fn directional_volume_from<R: StarRegion + ?Sized>(
    region: &R,
    center: &Vector3<f64>,
    cutoff: f64,
    qmc: &QmcConfig,
) -> Estimate {
    let k = curvature_of(region.geometry());
    let full = ball_volume(k, ConeAngle::FULL, cutoff);
    if full == 0.0 {
        return Estimate {
            mean: 0.0,
            std_error: 0.0,
        };
    }
    let e = replicated_means(qmc, 1, |p, acc| {
        let u = sphere_direction(p[0], p[1]);
        let ext = region.extent_from(center, &u).min(cutoff);
        acc[0] += ball_volume(k, ConeAngle::FULL, ext);
    })[0];
    Estimate {
        mean: e.mean,
        std_error: e.std_error,
    }
}

/// `Vol(region ∩ B(0, cutoff))` for a region star-shaped at the chart origin.
pub fn directional_volume<R: StarRegion + ?Sized>(region: &R, cutoff: f64, qmc: &QmcConfig) -> Estimate {
    directional_volume_from(region, &Vector3::zeros(), cutoff, qmc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub r: f64,
    pub ratio: f64,
    pub std_error: f64,
}

/// `Vol(region ∩ B(center, r)) / V_K(r)` at each radius.
///
/// The region's geometry fixes the curvature: `K = 0` for Euclidean
/// regions and `K = −1` for Klein-chart regions. `center` is in chart
/// coordinates and the region must be star-shaped about it.
pub fn bishop_gromov_profile<R: StarRegion + ?Sized>(
    region: &R,
    k: Curvature,
    center: &Vector3<f64>,
    radii: &[f64],
    qmc: &QmcConfig,
) -> Result<Vec<ProfilePoint>, DirichletError> {
    if k != curvature_of(region.geometry()) {
        return Err(DirichletError::CurvatureMismatch(k.value()));
    }
    if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) || radii.windows(2).any(|w| w[0] > w[1]) {
        return Err(DirichletError::InvalidRadii);
    }
    if !region.contains(center) {
        return Err(DirichletError::CenterOutside);
    }
    let denominators: Vec<f64> = radii.iter().map(|&r| ball_volume(k, ConeAngle::FULL, r)).collect();
    let estimates = replicated_means(qmc, radii.len(), |p, acc| {
        let u = sphere_direction(p[0], p[1]);
        let ext = region.extent_from(center, &u);
        for (j, (&r, &v)) in radii.iter().zip(&denominators).enumerate() {
            acc[j] += if ext >= r {
                1.0
            } else {
                ball_volume(k, ConeAngle::FULL, ext) / v
            };
        }
    });
    Ok(radii
        .iter()
        .zip(estimates)
        .map(|(&r, e)| ProfilePoint {
            r,
            ratio: e.mean,
            std_error: e.std_error,
        })
        .collect())
}

/// Whether consecutive ratios never rise by more than `sigmas` combined
/// standard errors.
pub fn is_non_increasing(profile: &[ProfilePoint], sigmas: f64) -> bool {
    profile.windows(2).all(|w| {
        let slack = sigmas * w[0].std_error.hypot(w[1].std_error);
        w[1].ratio <= w[0].ratio + slack + 1e-15
    })
}

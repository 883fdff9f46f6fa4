//! Dirichlet domains of discrete isometry groups.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use super::isometry::{GeometryKind, HalfSpace, Isometry, Point};
use super::polytope::{ConvexPolyhedron, Plane, BOX_PLANES};
use super::profile::{directional_volume, StarRegion};
use super::DirichletError;
use crate::qmc::QmcConfig;

/// Matrices closer than this are the same group element.
const SAME_ELEMENT: f64 = 1e-8;
/// Distinct orbit points closer than this signal a non-discrete group.
const ORBIT_SEPARATION: f64 = 1e-6;
const MAX_ELEMENTS: usize = 200_000;

pub const DEFAULT_MAX_WORD_LENGTH: usize = 6;

/// A group element with the word that produced it. Letter `i + 1` is
/// generator `i`, letter `−(i + 1)` its inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub word: Vec<i32>,
    pub isometry: Isometry,
}

/// Renders a word with `a, b, c, …` for generators and capitals for inverses.
pub fn word_string(word: &[i32]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter()
        .map(|&l| {
            let i = (l.unsigned_abs() - 1) as u8;
            let c = if i < 26 { (b'a' + i) as char } else { '?' };
            if l < 0 {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FaceSource {
    /// Bisector of the basepoint and its image under an element.
    Bisector { element: usize },
    /// One of the two boundary half-planes of the singular wedge.
    Wedge { side: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainFace {
    pub cell: usize,
    pub source: FaceSource,
    /// Chart coordinates, counter-clockwise seen from outside.
    pub vertices: Vec<Vector3<f64>>,
    /// Whether the face meets the cutoff truncation.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacePairing {
    pub face: usize,
    pub partner: usize,
    /// The element carrying `face` onto `partner`.
    pub word: String,
    /// Largest vertex mismatch after mapping, for untruncated faces.
    pub vertex_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainVolume {
    pub value: f64,
    pub std_error: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletDomain {
    pub kind: GeometryKind,
    pub basepoint: Point,
    /// Maps chart coordinates (basepoint at the origin) to world coordinates.
    pub frame: Isometry,
    pub cutoff: f64,
    pub cone_angle: Option<f64>,
    /// Enumerated non-identity elements, in world coordinates.
    pub elements: Vec<GroupElement>,
    /// World half-spaces of the bisectors that meet the cutoff ball.
    pub half_spaces: Vec<HalfSpace>,
    pub cells: Vec<ConvexPolyhedron>,
    pub faces: Vec<DomainFace>,
    pub pairings: Vec<FacePairing>,
    pub convex: bool,
    pub truncated: bool,
    pub volume: DomainVolume,
    /// Distance between the two bounding planes when every face is
    /// orthogonal to a common line through the basepoint.
    pub slab_width: Option<f64>,
    /// Pairs of vertices closer than the cutoff that lie on three or more
    /// bisector faces (higher-codimension coincidences), reported only.
    pub vertex_cycles: usize,
    #[serde(skip)]
    chart_elements: Vec<Isometry>,
}

struct Enumeration {
    chart: Vec<Isometry>,
    world: Vec<GroupElement>,
}

fn spatial_key(v: &Vector3<f64>) -> (i64, i64, i64) {
    let s = 1.0 / ORBIT_SEPARATION;
    (
        (v.x * s).floor() as i64,
        (v.y * s).floor() as i64,
        (v.z * s).floor() as i64,
    )
}

/// Breadth-first enumeration of distinct non-identity elements.
fn enumerate(world_generators: &[Isometry], frame: &Isometry, max_len: usize) -> Result<Enumeration, DirichletError> {
    let kind = frame.kind();
    let frame_inv = frame.invert();
    let chart_generators: Vec<Isometry> = world_generators
        .iter()
        .map(|g| frame_inv.compose(g)?.compose(frame))
        .collect::<Result<_, _>>()?;

    let mut letters: Vec<(i32, Isometry, Isometry)> = Vec::new();
    for (i, (c, w)) in chart_generators.iter().zip(world_generators).enumerate() {
        letters.push((i as i32 + 1, *c, *w));
        letters.push((-(i as i32 + 1), c.invert(), w.invert()));
    }

    let origin = Point::origin(kind);
    let identity = Isometry::identity(kind);
    let mut chart: Vec<Isometry> = Vec::new();
    let mut world: Vec<GroupElement> = Vec::new();
    let mut buckets: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    let mut frontier: Vec<(Vec<i32>, Isometry, Isometry)> = vec![(Vec::new(), identity, Isometry::identity(kind))];

    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, c, w) in &frontier {
            for (letter, lc, lw) in &letters {
                if word.last() == Some(&-letter) {
                    continue;
                }
                let nc = c.compose(lc)?;
                if nc.max_difference(&identity) < SAME_ELEMENT {
                    continue;
                }
                let image = nc.apply(&origin)?;
                let key = spatial_key(&image.spatial());
                let mut duplicate = false;
                'search: for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            let Some(list) = buckets.get(&(key.0 + dx, key.1 + dy, key.2 + dz)) else {
                                continue;
                            };
                            for &j in list {
                                let other = chart[j].apply(&origin)?;
                                let gap = (other.spatial() - image.spatial()).norm();
                                if gap >= ORBIT_SEPARATION {
                                    continue;
                                }
                                if chart[j].max_difference(&nc) < SAME_ELEMENT {
                                    duplicate = true;
                                    break 'search;
                                }
                                return Err(if gap < 1e-9 {
                                    DirichletError::FixedBasepoint
                                } else {
                                    DirichletError::NonDiscrete { separation: gap }
                                });
                            }
                        }
                    }
                }
                if duplicate {
                    continue;
                }
                if image.distance(&origin)? < 1e-9 {
                    return Err(DirichletError::FixedBasepoint);
                }
                if chart.len() >= MAX_ELEMENTS {
                    return Err(DirichletError::TooManyElements(MAX_ELEMENTS));
                }
                let mut nw = word.clone();
                nw.push(*letter);
                let ww = w.compose(lw)?;
                buckets.entry(key).or_default().push(chart.len());
                chart.push(nc);
                world.push(GroupElement {
                    word: nw.clone(),
                    isometry: ww,
                });
                next.push((nw, nc, ww));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Enumeration { chart, world })
}

fn frame_for(basepoint: &Point) -> Isometry {
    match basepoint {
        Point::Euclidean(v) => Isometry::translation(*v),
        Point::Hyperbolic(y) => Isometry::boost_to(y),
    }
}

fn chart_half_width(kind: GeometryKind, cutoff: f64) -> f64 {
    match kind {
        GeometryKind::Euclidean => cutoff,
        GeometryKind::Lorentz => cutoff.tanh(),
    }
}

/// The chart plane of the bisector between the origin and `g(origin)`.
fn chart_bisector(g: &Isometry) -> Result<Plane, DirichletError> {
    let origin = Point::origin(g.kind());
    let h = super::isometry::bisector(&origin, g)?;
    let (n, c) = h.chart_plane();
    Ok(Plane::new(n, c))
}

fn check_inputs(generators: &[Isometry], basepoint: &Point, cutoff: f64) -> Result<(), DirichletError> {
    basepoint.validate()?;
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(DirichletError::InvalidCutoff(cutoff));
    }
    for g in generators {
        if g.kind() != basepoint.kind() {
            return Err(DirichletError::KindMismatch);
        }
        g.validate()?;
    }
    Ok(())
}

struct CellSpec {
    wedge: Vec<(Plane, usize)>,
}

/// Shared construction: clip each cell by the wedge planes and the kept
/// bisectors, then label faces, pair them and measure the union.
#[allow(clippy::too_many_arguments)]
fn assemble(
    kind: GeometryKind,
    basepoint: Point,
    frame: Isometry,
    cutoff: f64,
    cone_angle: Option<f64>,
    enumeration: Enumeration,
    cells: Vec<CellSpec>,
    qmc: &QmcConfig,
) -> Result<DirichletDomain, DirichletError> {
    let origin = Point::origin(kind);
    let mut kept: Vec<usize> = Vec::new();
    let mut bisector_planes = Vec::new();
    for (i, g) in enumeration.chart.iter().enumerate() {
        let d = g.apply(&origin)?.distance(&origin)?;
        if d / 2.0 <= cutoff {
            kept.push(i);
            bisector_planes.push(chart_bisector(g)?);
        }
    }

    let half_width = chart_half_width(kind, cutoff);
    let mut polyhedra = Vec::new();
    let mut faces = Vec::new();
    for (ci, spec) in cells.iter().enumerate() {
        let mut planes: Vec<Plane> = spec.wedge.iter().map(|(p, _)| *p).collect();
        planes.extend_from_slice(&bisector_planes);
        let poly = ConvexPolyhedron::clip_box(kind, Vector3::zeros(), half_width, &planes);
        let wedge_count = spec.wedge.len();
        for (fi, f) in poly.faces.iter().enumerate() {
            if f.plane < BOX_PLANES {
                continue;
            }
            let local = f.plane - BOX_PLANES;
            let source = if local < wedge_count {
                let side = spec.wedge[local].1;
                if side > 1 {
                    // internal wall between the two half-wedges
                    continue;
                }
                FaceSource::Wedge { side }
            } else {
                FaceSource::Bisector {
                    element: kept[local - wedge_count],
                }
            };
            let vertices = poly.face_vertices(fi);
            let truncated = vertices
                .iter()
                .any(|v| poly.planes[..BOX_PLANES].iter().any(|p| p.value(v) > -1e-9));
            faces.push(DomainFace {
                cell: ci,
                source,
                vertices,
                truncated,
            });
        }
        polyhedra.push(poly);
    }

    let truncated = polyhedra
        .iter()
        .any(|p| p.max_vertex_distance() > cutoff + 1e-9 || p.faces.iter().any(|f| f.plane < BOX_PLANES));

    let pairings = pair_faces(&faces, &enumeration.chart, &enumeration.world, cone_angle)?;

    let volume = if !truncated && kind == GeometryKind::Euclidean {
        DomainVolume {
            value: polyhedra.iter().map(|p| p.chart_volume()).sum(),
            std_error: 0.0,
            exact: true,
        }
    } else {
        let union = CellUnion { cells: &polyhedra };
        let e = directional_volume(&union, cutoff, qmc);
        DomainVolume {
            value: e.mean,
            std_error: e.std_error,
            exact: false,
        }
    };

    let slab_width = slab_width(kind, &faces, &polyhedra);
    let vertex_cycles = count_vertex_cycles(&faces);
    let half_spaces = kept
        .iter()
        .map(|&i| super::isometry::bisector(&basepoint, &enumeration.world[i].isometry))
        .collect::<Result<_, _>>()?;

    Ok(DirichletDomain {
        kind,
        basepoint,
        frame,
        cutoff,
        cone_angle,
        elements: enumeration.world,
        half_spaces,
        convex: cone_angle.is_none_or(|a| a <= PI),
        cells: polyhedra,
        faces,
        pairings,
        truncated,
        volume,
        slab_width,
        vertex_cycles,
        chart_elements: enumeration.chart,
    })
}

fn find_element(chart: &[Isometry], g: &Isometry) -> Option<usize> {
    chart.iter().position(|h| h.max_difference(g) < SAME_ELEMENT)
}

fn vertex_set_error(mapped: &[Vector3<f64>], target: &[Vector3<f64>]) -> f64 {
    if mapped.len() != target.len() {
        return f64::INFINITY;
    }
    mapped
        .iter()
        .map(|m| target.iter().map(|t| (m - t).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

fn pair_faces(
    faces: &[DomainFace],
    chart: &[Isometry],
    world: &[GroupElement],
    cone_angle: Option<f64>,
) -> Result<Vec<FacePairing>, DirichletError> {
    let mut pairings = Vec::new();
    for (fi, face) in faces.iter().enumerate() {
        let (partner, map, word) = match face.source {
            FaceSource::Bisector { element } => {
                // g⁻¹ carries the bisector of (x, gx) onto that of (x, g⁻¹x)
                let inv = chart[element].invert();
                let Some(j) = find_element(chart, &inv) else {
                    continue;
                };
                let Some(partner) = faces
                    .iter()
                    .position(|f| f.source == FaceSource::Bisector { element: j })
                else {
                    continue;
                };
                (partner, inv, super::domain::word_string(&world[j].word))
            }
            FaceSource::Wedge { side } => {
                let alpha = cone_angle.unwrap_or(TAU);
                let Some(partner) = faces
                    .iter()
                    .position(|f| f.source == FaceSource::Wedge { side: 1 - side })
                else {
                    continue;
                };
                let angle = if side == 0 { alpha } else { -alpha };
                let rot = Isometry::screw(Vector3::z(), angle, 0.0);
                let map = match chart.first().map(|g| g.kind()) {
                    Some(GeometryKind::Lorentz) => Isometry::lorentz_rotation(Vector3::z(), angle),
                    _ => rot,
                };
                (partner, map, format!("rotation({angle:.12})"))
            }
        };
        let vertex_error = if face.truncated || faces[partner].truncated {
            None
        } else {
            let mapped: Vec<_> = face.vertices.iter().map(|v| map.apply_chart(v)).collect();
            Some(vertex_set_error(&mapped, &faces[partner].vertices))
        };
        pairings.push(FacePairing {
            face: fi,
            partner,
            word,
            vertex_error,
        });
    }
    Ok(pairings)
}

fn slab_width(kind: GeometryKind, faces: &[DomainFace], cells: &[ConvexPolyhedron]) -> Option<f64> {
    let mut axis: Option<Vector3<f64>> = None;
    let mut upper = f64::INFINITY;
    let mut lower = f64::INFINITY;
    for f in faces {
        if !matches!(f.source, FaceSource::Bisector { .. }) {
            continue;
        }
        let (a, b) = (f.vertices[0], f.vertices[1]);
        let c = f.vertices[2];
        let n = (b - a).cross(&(c - a)).normalize();
        let offset = n.dot(&a);
        let axis = *axis.get_or_insert(n);
        if axis.cross(&n).norm() > 1e-9 {
            return None;
        }
        if axis.dot(&n) > 0.0 {
            upper = upper.min(offset);
        } else {
            lower = lower.min(offset);
        }
    }
    if !(upper.is_finite() && lower.is_finite()) || cells.is_empty() {
        return None;
    }
    Some(match kind {
        GeometryKind::Euclidean => upper + lower,
        GeometryKind::Lorentz => upper.atanh() + lower.atanh(),
    })
}

fn count_vertex_cycles(faces: &[DomainFace]) -> usize {
    let mut points: Vec<(Vector3<f64>, usize)> = Vec::new();
    for f in faces {
        if !matches!(f.source, FaceSource::Bisector { .. }) || f.truncated {
            continue;
        }
        for v in &f.vertices {
            match points.iter_mut().find(|(p, _)| (p - v).norm() < 1e-9) {
                Some(entry) => entry.1 += 1,
                None => points.push((*v, 1)),
            }
        }
    }
    points.iter().filter(|(_, n)| *n >= 3).count()
}

struct CellUnion<'a> {
    cells: &'a [ConvexPolyhedron],
}

impl StarRegion for CellUnion<'_> {
    fn geometry(&self) -> GeometryKind {
        self.cells[0].geometry
    }

    fn pieces(&self) -> &[ConvexPolyhedron] {
        self.cells
    }
}

impl DirichletDomain {
    /// Number of unordered face pairs.
    pub fn pair_count(&self) -> usize {
        self.pairings.iter().filter(|p| p.face < p.partner).count()
    }

    pub fn partner_of(&self, face: usize) -> Option<usize> {
        self.pairings.iter().find(|p| p.face == face).map(|p| p.partner)
    }

    /// Whether a world point lies in the domain, within `tol` of its planes.
    pub fn contains_world(&self, p: &Point, tol: f64) -> Result<bool, DirichletError> {
        let chart = self.frame.invert().apply(p)?.chart();
        Ok(self.cells.iter().any(|c| c.contains(&chart, tol)))
    }

    /// Whether a world point lies in the open domain, `tol` away from its planes.
    pub fn contains_world_strictly(&self, p: &Point, tol: f64) -> Result<bool, DirichletError> {
        let chart = self.frame.invert().apply(p)?.chart();
        Ok(self.cells.iter().any(|c| c.contains_strictly(&chart, tol)))
    }

    /// Enumerated elements in chart coordinates.
    pub fn chart_elements(&self) -> &[Isometry] {
        &self.chart_elements
    }

    /// Largest violation of a cell's half-spaces by that cell's vertices.
    pub fn hull_defect(&self) -> f64 {
        self.cells.iter().map(|c| c.hull_defect()).fold(0.0, f64::max)
    }
}

impl StarRegion for DirichletDomain {
    fn geometry(&self) -> GeometryKind {
        self.kind
    }

    fn pieces(&self) -> &[ConvexPolyhedron] {
        &self.cells
    }
}

/// Intersection of the bisector half-spaces `{d(y,x) ≤ d(y,gx)}` over all
/// non-identity words of length at most `max_word_length` whose bisector
/// meets `B(basepoint, cutoff)`.
pub fn dirichlet_domain(
    generators: &[Isometry],
    basepoint: &Point,
    cutoff: f64,
    max_word_length: usize,
    qmc: &QmcConfig,
) -> Result<DirichletDomain, DirichletError> {
    check_inputs(generators, basepoint, cutoff)?;
    let frame = frame_for(basepoint);
    let enumeration = enumerate(generators, &frame, max_word_length)?;
    assemble(
        basepoint.kind(),
        *basepoint,
        frame,
        cutoff,
        None,
        enumeration,
        vec![CellSpec { wedge: Vec::new() }],
        qmc,
    )
}

/// The wedge `S_α = {0 ≤ θ ≤ α}` around the `z`-axis, whose two boundary
/// half-planes are identified by the rotation through `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorLift {
    pub alpha: f64,
}

impl SectorLift {
    pub fn new(alpha: f64) -> Result<Self, DirichletError> {
        if alpha > 0.0 && alpha <= TAU {
            Ok(SectorLift { alpha })
        } else {
            Err(DirichletError::InvalidConeAngle(alpha))
        }
    }

    /// Rotation identifying the face `θ = 0` with the face `θ = α`.
    pub fn identification(&self, kind: GeometryKind) -> Isometry {
        match kind {
            GeometryKind::Euclidean => Isometry::screw(Vector3::z(), self.alpha, 0.0),
            GeometryKind::Lorentz => Isometry::lorentz_rotation(Vector3::z(), self.alpha),
        }
    }
}

/// `{θ₀ ≤ θ ≤ θ₁}` for `θ₁ − θ₀ < π`, as two planes through the axis.
fn wedge_planes(theta0: f64, theta1: f64) -> [Plane; 2] {
    [
        Plane::new(Vector3::new(theta0.sin(), -theta0.cos(), 0.0), 0.0),
        Plane::new(Vector3::new(-theta1.sin(), theta1.cos(), 0.0), 0.0),
    ]
}

fn on_axis(p: &Point) -> bool {
    let v = p.spatial();
    v.x.hypot(v.y) <= 1e-9 * (1.0 + v.z.abs())
}

fn axis_rotation(kind: GeometryKind, angle: f64) -> Isometry {
    match kind {
        GeometryKind::Euclidean => Isometry::Euclidean {
            rotation: *Rotation3::from_axis_angle(&Vector3::z_axis(), angle).matrix(),
            translation: Vector3::zeros(),
        },
        GeometryKind::Lorentz => Isometry::lorentz_rotation(Vector3::z(), angle),
    }
}

/// Dirichlet domain of a cone manifold lifted to the sector `S_α`, for a
/// basepoint on the singular axis (the `z`-axis).
///
/// Deck maps must commute with rotations about the axis. For `α ≥ π` the
/// sector is stored as two convex half-wedges.
pub fn singular_dirichlet(
    lift: &SectorLift,
    deck: &[Isometry],
    basepoint: &Point,
    cutoff: f64,
    max_word_length: usize,
    qmc: &QmcConfig,
) -> Result<DirichletDomain, DirichletError> {
    check_inputs(deck, basepoint, cutoff)?;
    if !on_axis(basepoint) {
        return Err(DirichletError::BasepointOffAxis);
    }
    let kind = basepoint.kind();
    let probe = axis_rotation(kind, 0.7);
    for (i, g) in deck.iter().enumerate() {
        let lhs = g.compose(&probe)?;
        let rhs = probe.compose(g)?;
        if lhs.max_difference(&rhs) > 1e-8 * g.max_difference(&Isometry::identity(kind)).max(1.0) {
            return Err(DirichletError::DeckNotAxial(i));
        }
    }
    if lift.alpha == TAU {
        let mut d = dirichlet_domain(deck, basepoint, cutoff, max_word_length, qmc)?;
        d.cone_angle = Some(TAU);
        return Ok(d);
    }
    let frame = frame_for(basepoint);
    let enumeration = enumerate(deck, &frame, max_word_length)?;
    let alpha = lift.alpha;
    let cells = if alpha < PI {
        let [a, b] = wedge_planes(0.0, alpha);
        vec![CellSpec {
            wedge: vec![(a, 0), (b, 1)],
        }]
    } else {
        let half = alpha / 2.0;
        let [a, mid_lo] = wedge_planes(0.0, half);
        let [mid_hi, b] = wedge_planes(half, alpha);
        vec![
            CellSpec {
                wedge: vec![(a, 0), (mid_lo, 2)],
            },
            CellSpec {
                wedge: vec![(mid_hi, 2), (b, 1)],
            },
        ]
    };
    assemble(kind, *basepoint, frame, cutoff, Some(alpha), enumeration, cells, qmc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quick() -> QmcConfig {
        QmcConfig {
            replicates: 4,
            points_per_replicate: 1 << 12,
            seed: 1,
        }
    }

    fn z3() -> Vec<Isometry> {
        vec![
            Isometry::translation(Vector3::x()),
            Isometry::translation(Vector3::y()),
            Isometry::translation(Vector3::z()),
        ]
    }

    #[test]
    fn integer_lattice_gives_unit_cube() {
        let d = dirichlet_domain(&z3(), &Point::origin(GeometryKind::Euclidean), 1.0, 6, &quick()).unwrap();
        assert!(!d.truncated);
        assert!(d.volume.exact);
        assert_relative_eq!(d.volume.value, 1.0, epsilon = 1e-12);
        assert_eq!(d.faces.len(), 6);
        assert_eq!(d.pair_count(), 3);
        for p in &d.pairings {
            assert_eq!(d.partner_of(p.partner), Some(p.face));
            assert!(p.vertex_error.unwrap() < 1e-8);
        }
        assert!(d.hull_defect() < 1e-12);
    }

    #[test]
    fn off_origin_basepoint() {
        let x = Point::Euclidean(Vector3::new(0.3, -0.2, 5.0));
        let d = dirichlet_domain(&z3(), &x, 1.0, 4, &quick()).unwrap();
        assert_relative_eq!(d.volume.value, 1.0, epsilon = 1e-12);
        assert!(d
            .contains_world(&Point::Euclidean(Vector3::new(0.75, -0.2, 5.0)), 1e-12)
            .unwrap());
        assert!(!d
            .contains_world(&Point::Euclidean(Vector3::new(0.85, -0.2, 5.0)), 1e-12)
            .unwrap());
    }

    #[test]
    fn screw_motion_on_axis_gives_slab() {
        let g = Isometry::screw(Vector3::z(), 0.9, 2.0);
        let d = dirichlet_domain(&[g], &Point::origin(GeometryKind::Euclidean), 3.0, 6, &quick()).unwrap();
        assert_eq!(d.faces.len(), 2);
        assert_relative_eq!(d.slab_width.unwrap(), 2.0, epsilon = 1e-12);
        assert!(d.truncated);
    }

    #[test]
    fn no_generators_gives_ball() {
        let d = dirichlet_domain(&[], &Point::origin(GeometryKind::Lorentz), 1.0, 6, &quick()).unwrap();
        assert!(d.faces.is_empty());
        assert_relative_eq!(d.volume.value, PI * (2f64.sinh() - 2.0), max_relative = 1e-12);
    }

    #[test]
    fn fixed_point_is_rejected() {
        let r = Isometry::screw(Vector3::z(), 0.5, 0.0);
        let e = dirichlet_domain(&[r], &Point::origin(GeometryKind::Euclidean), 1.0, 3, &quick());
        assert_eq!(e.unwrap_err(), DirichletError::FixedBasepoint);
    }

    #[test]
    fn dense_group_is_rejected() {
        let a = Isometry::translation(Vector3::x());
        let b = Isometry::translation(Vector3::new(1.0 + 1e-7, 0.0, 0.0));
        let e = dirichlet_domain(&[a, b], &Point::origin(GeometryKind::Euclidean), 1.0, 4, &quick());
        assert!(matches!(e, Err(DirichletError::NonDiscrete { .. })), "{e:?}");
    }

    #[test]
    fn hyperbolic_loxodromic_slab() {
        let g = Isometry::lorentz_screw(Vector3::z(), 1.1, 0.8);
        let d = dirichlet_domain(&[g], &Point::origin(GeometryKind::Lorentz), 1.5, 6, &quick()).unwrap();
        assert_eq!(d.faces.len(), 2);
        assert_relative_eq!(d.slab_width.unwrap(), 0.8, epsilon = 1e-10);
        assert_eq!(d.pair_count(), 1);
    }

    #[test]
    fn sector_slab() {
        let g = Isometry::translation(Vector3::new(0.0, 0.0, 1.5));
        let origin = Point::origin(GeometryKind::Euclidean);
        for alpha in [PI / 3.0, PI, 1.5 * PI] {
            let d = singular_dirichlet(&SectorLift::new(alpha).unwrap(), &[g], &origin, 1.0, 6, &quick()).unwrap();
            assert_relative_eq!(d.slab_width.unwrap(), 1.5, epsilon = 1e-12);
            assert_eq!(d.convex, alpha <= PI);
            let wedges = d
                .faces
                .iter()
                .filter(|f| matches!(f.source, FaceSource::Wedge { .. }))
                .count();
            assert_eq!(wedges, 2);
            // S_α ∩ {|z| ≤ h} ∩ B(1) = α/2π · π(2h − 2h³/3)
            let h: f64 = 0.75;
            let exact = alpha / TAU * PI * (2.0 * h - 2.0 * h.powi(3) / 3.0);
            assert!(
                (d.volume.value - exact).abs() < 4.0 * d.volume.std_error + 1e-3,
                "{alpha} {:?} {exact}",
                d.volume
            );
        }
    }

    #[test]
    fn full_angle_sector_matches_plain_domain() {
        let g = Isometry::translation(Vector3::new(0.0, 0.0, 1.5));
        let origin = Point::origin(GeometryKind::Euclidean);
        let a = singular_dirichlet(&SectorLift::new(TAU).unwrap(), &[g], &origin, 1.0, 6, &quick()).unwrap();
        let b = dirichlet_domain(&[g], &origin, 1.0, 6, &quick()).unwrap();
        assert_eq!(a.cells, b.cells);
        assert_eq!(a.volume, b.volume);
    }

    #[test]
    fn sector_rejects_bad_input() {
        let origin = Point::origin(GeometryKind::Euclidean);
        let lift = SectorLift::new(PI).unwrap();
        let off = Point::Euclidean(Vector3::new(0.1, 0.0, 0.0));
        assert_eq!(
            singular_dirichlet(&lift, &[], &off, 1.0, 6, &quick()).unwrap_err(),
            DirichletError::BasepointOffAxis
        );
        let tilted = Isometry::translation(Vector3::new(1.0, 0.0, 1.0));
        assert_eq!(
            singular_dirichlet(&lift, &[tilted], &origin, 1.0, 6, &quick()).unwrap_err(),
            DirichletError::DeckNotAxial(0)
        );
    }

    #[test]
    fn words_render_as_letters() {
        assert_eq!(word_string(&[1, -2, 3]), "aBc");
        assert_eq!(word_string(&[]), "1");
    }
}

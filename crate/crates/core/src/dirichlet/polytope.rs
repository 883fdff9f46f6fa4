//! Bounded convex polyhedra given by half-spaces in chart coordinates.
//!
//! The same machinery serves `E³` and `H³`: hyperbolic planes are flat in
//! the Klein chart, so a hyperbolic polyhedron is a Euclidean polyhedron
//! inside the unit ball. Only distances and volumes depend on the geometry.

use nalgebra::{Vector3, Vector4};
use serde::{Deserialize, Serialize};

use super::isometry::{klein_radius_to_distance, GeometryKind, Isometry};

/// `{ p : normal·p ≤ offset }` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

impl Plane {
    pub fn new(normal: Vector3<f64>, offset: f64) -> Plane {
        let len = normal.norm();
        Plane {
            normal: normal / len,
            offset: offset / len,
        }
    }

    pub fn value(&self, p: &Vector3<f64>) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Image under an isometry acting on the chart.
    pub fn transform(&self, g: &Isometry) -> Plane {
        match g {
            Isometry::Euclidean { rotation, translation } => {
                let n = rotation * self.normal;
                Plane::new(n, self.offset + n.dot(translation))
            }
            Isometry::Lorentz { matrix } => {
                let m = matrix * Vector4::new(self.offset, self.normal.x, self.normal.y, self.normal.z);
                Plane::new(Vector3::new(m[1], m[2], m[3]), m[0])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Face {
    /// Index into [`ConvexPolyhedron::planes`].
    pub plane: usize,
    /// Vertex indices, counter-clockwise seen from outside.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolyhedron {
    pub geometry: GeometryKind,
    pub planes: Vec<Plane>,
    pub vertices: Vec<Vector3<f64>>,
    pub faces: Vec<Face>,
}

/// Number of planes of the initial bounding cube, stored first.
pub const BOX_PLANES: usize = 6;

type Polygon = (usize, Vec<Vector3<f64>>);

impl ConvexPolyhedron {
    /// Intersection of the cube `|p − center|_∞ ≤ half_width` with `planes`.
    ///
    /// The cube's planes occupy indices `0..6` of the result; the given
    /// planes follow in order. Planes that do not cut contribute no face.
    pub fn clip_box(
        geometry: GeometryKind,
        center: Vector3<f64>,
        half_width: f64,
        planes: &[Plane],
    ) -> ConvexPolyhedron {
        let scale = half_width.max(center.amax());
        let tol = 1e-11 * scale.max(1.0);
        let mut all_planes = Vec::with_capacity(BOX_PLANES + planes.len());
        for axis in 0..3 {
            for sign in [1.0, -1.0] {
                let mut n = Vector3::zeros();
                n[axis] = sign;
                all_planes.push(Plane::new(n, sign * center[axis] + half_width));
            }
        }
        all_planes.extend_from_slice(planes);

        let mut faces = cube_faces(center, half_width);
        for (label, plane) in all_planes.iter().enumerate().skip(BOX_PLANES) {
            faces = clip(faces, plane, label, tol);
        }
        ConvexPolyhedron::from_polygons(geometry, all_planes, faces, tol * 10.0)
    }

    fn from_polygons(geometry: GeometryKind, planes: Vec<Plane>, polygons: Vec<Polygon>, tol: f64) -> ConvexPolyhedron {
        let mut vertices: Vec<Vector3<f64>> = Vec::new();
        let mut faces = Vec::new();
        for (label, poly) in polygons {
            let mut idx: Vec<usize> = Vec::new();
            for p in poly {
                let i = match vertices.iter().position(|v| (v - p).norm() <= tol) {
                    Some(i) => i,
                    None => {
                        vertices.push(p);
                        vertices.len() - 1
                    }
                };
                if idx.last() != Some(&i) && idx.first() != Some(&i) {
                    idx.push(i);
                }
            }
            if idx.len() >= 3 {
                faces.push(Face {
                    plane: label,
                    vertices: idx,
                });
            }
        }
        ConvexPolyhedron {
            geometry,
            planes,
            vertices,
            faces,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, p: &Vector3<f64>, tol: f64) -> bool {
        self.planes.iter().all(|pl| pl.value(p) <= tol)
    }

    /// Whether `p` is inside with margin `tol` from every plane.
    pub fn contains_strictly(&self, p: &Vector3<f64>, tol: f64) -> bool {
        self.planes.iter().all(|pl| pl.value(p) < -tol)
    }

    pub fn vertex_centroid(&self) -> Vector3<f64> {
        self.vertices.iter().sum::<Vector3<f64>>() / self.vertices.len() as f64
    }

    /// Exact Euclidean volume of the chart polyhedron.
    pub fn chart_volume(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let c = self.vertex_centroid();
        let mut total = 0.0;
        for f in &self.faces {
            let a = self.vertices[f.vertices[0]] - c;
            for w in f.vertices[1..].windows(2) {
                let b = self.vertices[w[0]] - c;
                let d = self.vertices[w[1]] - c;
                total += a.dot(&b.cross(&d)) / 6.0;
            }
        }
        total
    }

    /// Chart parameter at which the ray `origin + t·dir` leaves the
    /// polyhedron; `0` if it starts outside or immediately leaves.
    pub fn ray_exit(&self, origin: &Vector3<f64>, dir: &Vector3<f64>) -> f64 {
        let mut t = f64::INFINITY;
        for pl in &self.planes {
            let slope = pl.normal.dot(dir);
            let gap = -pl.value(origin);
            if gap < 0.0 {
                return 0.0;
            }
            if slope > 0.0 {
                t = t.min(gap / slope);
            }
        }
        t
    }

    /// Geodesic distance from the chart origin to the boundary along `dir`.
    pub fn extent_from_origin(&self, dir: &Vector3<f64>) -> f64 {
        let t = self.ray_exit(&Vector3::zeros(), dir);
        match self.geometry {
            GeometryKind::Euclidean => t,
            GeometryKind::Lorentz => klein_radius_to_distance(t),
        }
    }

    /// Geodesic distance from the chart origin to a chart point.
    pub fn distance_from_origin(&self, p: &Vector3<f64>) -> f64 {
        match self.geometry {
            GeometryKind::Euclidean => p.norm(),
            GeometryKind::Lorentz => klein_radius_to_distance(p.norm()),
        }
    }

    pub fn max_vertex_distance(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| self.distance_from_origin(v))
            .fold(0.0, f64::max)
    }

    /// Image under an isometry of the matching kind.
    pub fn transform(&self, g: &Isometry) -> ConvexPolyhedron {
        ConvexPolyhedron {
            geometry: self.geometry,
            planes: self.planes.iter().map(|p| p.transform(g)).collect(),
            vertices: self.vertices.iter().map(|v| g.apply_chart(v)).collect(),
            faces: self.faces.clone(),
        }
    }

    /// Vertices of one face, in order.
    pub fn face_vertices(&self, face: usize) -> Vec<Vector3<f64>> {
        self.faces[face].vertices.iter().map(|&i| self.vertices[i]).collect()
    }

    /// Largest violation of any plane by any vertex.
    pub fn hull_defect(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|v| self.planes.iter().map(move |p| p.value(v)))
            .fold(0.0, f64::max)
    }
}

fn cube_faces(c: Vector3<f64>, w: f64) -> Vec<Polygon> {
    let corner = |sx: f64, sy: f64, sz: f64| c + Vector3::new(sx * w, sy * w, sz * w);
    // outward normals +x, −x, +y, −y, +z, −z, matching the plane order
    vec![
        (
            0,
            vec![
                corner(1., -1., -1.),
                corner(1., 1., -1.),
                corner(1., 1., 1.),
                corner(1., -1., 1.),
            ],
        ),
        (
            1,
            vec![
                corner(-1., -1., -1.),
                corner(-1., -1., 1.),
                corner(-1., 1., 1.),
                corner(-1., 1., -1.),
            ],
        ),
        (
            2,
            vec![
                corner(-1., 1., -1.),
                corner(-1., 1., 1.),
                corner(1., 1., 1.),
                corner(1., 1., -1.),
            ],
        ),
        (
            3,
            vec![
                corner(-1., -1., -1.),
                corner(1., -1., -1.),
                corner(1., -1., 1.),
                corner(-1., -1., 1.),
            ],
        ),
        (
            4,
            vec![
                corner(-1., -1., 1.),
                corner(1., -1., 1.),
                corner(1., 1., 1.),
                corner(-1., 1., 1.),
            ],
        ),
        (
            5,
            vec![
                corner(-1., -1., -1.),
                corner(-1., 1., -1.),
                corner(1., 1., -1.),
                corner(1., -1., -1.),
            ],
        ),
    ]
}

fn clip(faces: Vec<Polygon>, plane: &Plane, label: usize, tol: f64) -> Vec<Polygon> {
    if faces
        .iter()
        .flat_map(|(_, poly)| poly.iter())
        .all(|p| plane.value(p) <= tol)
    {
        return faces;
    }
    let mut out_faces = Vec::with_capacity(faces.len() + 1);
    let mut cap: Vec<Vector3<f64>> = Vec::new();
    for (lab, poly) in faces {
        let n = poly.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let va = plane.value(&a);
            let vb = plane.value(&b);
            if va <= tol {
                out.push(a);
                if va.abs() <= tol {
                    cap.push(a);
                }
            }
            if (va < -tol && vb > tol) || (va > tol && vb < -tol) {
                let p = a + (b - a) * (va / (va - vb));
                out.push(p);
                cap.push(p);
            }
        }
        if out.len() >= 3 {
            out_faces.push((lab, out));
        }
    }

    let mut unique: Vec<Vector3<f64>> = Vec::new();
    for p in cap {
        if !unique.iter().any(|q| (q - p).norm() <= 10.0 * tol) {
            unique.push(p);
        }
    }
    if unique.len() >= 3 {
        let centroid = unique.iter().sum::<Vector3<f64>>() / unique.len() as f64;
        let n = plane.normal;
        let e1 = (unique[0] - centroid).normalize();
        let e2 = n.cross(&e1);
        unique.sort_by(|a, b| {
            let da = a - centroid;
            let db = b - centroid;
            let ta = da.dot(&e2).atan2(da.dot(&e1));
            let tb = db.dot(&e2).atan2(db.dot(&e1));
            ta.total_cmp(&tb)
        });
        out_faces.push((label, unique));
    }
    out_faces
}

//! Rigid motions of `E³` and Lorentz transformations of `H³`.
//!
//! Hyperbolic space is the upper sheet of `{ ⟨y, y⟩ = −1 }` for the Minkowski
//! form `⟨u, v⟩ = −u₀v₀ + u₁v₁ + u₂v₂ + u₃v₃`, with the time coordinate first.
//! Charts for hyperbolic points use the Klein model `k = y⃗ / y₀`, in which
//! geodesics and planes are straight.

use nalgebra::{Matrix3, Matrix4, Rotation3, Unit, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use super::DirichletError;

const FORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Euclidean,
    Lorentz,
}

/// `−u₀v₀ + u₁v₁ + u₂v₂ + u₃v₃`.
pub fn minkowski_dot(u: &Vector4<f64>, v: &Vector4<f64>) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

fn minkowski_form() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Nearest Lorentz matrix: the exact boost to the image of the origin
/// times the closest rotation, which removes the drift that products of
/// large boosts accumulate.
fn reproject_lorentz(m: Matrix4<f64>) -> Matrix4<f64> {
    let v = Vector3::new(m[(1, 0)], m[(2, 0)], m[(3, 0)]);
    let y = Vector4::new((1.0 + v.norm_squared()).sqrt(), v[0], v[1], v[2]);
    let Isometry::Lorentz { matrix: b } = Isometry::boost_to(&y) else {
        unreachable!()
    };
    let j = minkowski_form();
    let rest = j * b.transpose() * j * m;
    let svd = rest.fixed_view::<3, 3>(1, 1).into_owned().svd(true, true);
    let (Some(u), Some(vt)) = (svd.u, svd.v_t) else {
        return m;
    };
    let mut r = Matrix4::identity();
    r.fixed_view_mut::<3, 3>(1, 1).copy_from(&(u * vt));
    b * r
}

/// A point of `E³` or of the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "coords", rename_all = "lowercase")]
pub enum Point {
    Euclidean(Vector3<f64>),
    #[serde(rename = "lorentz")]
    Hyperbolic(Vector4<f64>),
}

impl Point {
    pub fn origin(kind: GeometryKind) -> Point {
        match kind {
            GeometryKind::Euclidean => Point::Euclidean(Vector3::zeros()),
            GeometryKind::Lorentz => Point::Hyperbolic(Vector4::new(1.0, 0.0, 0.0, 0.0)),
        }
    }

    /// Hyperboloid point with the given spatial part.
    pub fn hyperbolic_from_spatial(v: Vector3<f64>) -> Point {
        Point::Hyperbolic(Vector4::new((1.0 + v.norm_squared()).sqrt(), v.x, v.y, v.z))
    }

    /// Hyperboloid point with the given Klein coordinates, `|k| < 1`.
    pub fn from_klein(k: &Vector3<f64>) -> Point {
        let s = 1.0 / (1.0 - k.norm_squared()).sqrt();
        Point::Hyperbolic(Vector4::new(s, s * k.x, s * k.y, s * k.z))
    }

    pub fn kind(&self) -> GeometryKind {
        match self {
            Point::Euclidean(_) => GeometryKind::Euclidean,
            Point::Hyperbolic(_) => GeometryKind::Lorentz,
        }
    }

    /// Euclidean coordinates, or Klein coordinates of a hyperbolic point.
    pub fn chart(&self) -> Vector3<f64> {
        match self {
            Point::Euclidean(v) => *v,
            Point::Hyperbolic(y) => Vector3::new(y[1], y[2], y[3]) / y[0],
        }
    }

    /// Coordinates used for proximity tests: position or hyperboloid spatial part.
    pub(crate) fn spatial(&self) -> Vector3<f64> {
        match self {
            Point::Euclidean(v) => *v,
            Point::Hyperbolic(y) => Vector3::new(y[1], y[2], y[3]),
        }
    }

    pub fn validate(&self) -> Result<(), DirichletError> {
        match self {
            Point::Euclidean(v) if v.iter().all(|c| c.is_finite()) => Ok(()),
            Point::Hyperbolic(y) if y.iter().all(|c| c.is_finite()) => {
                if y[0] > 0.0 && (minkowski_dot(y, y) + 1.0).abs() < 1e-8 * y[0] * y[0] {
                    Ok(())
                } else {
                    Err(DirichletError::InvalidPoint("not on the upper hyperboloid sheet"))
                }
            }
            _ => Err(DirichletError::InvalidPoint("non-finite coordinates")),
        }
    }

    pub fn distance(&self, other: &Point) -> Result<f64, DirichletError> {
        match (self, other) {
            (Point::Euclidean(a), Point::Euclidean(b)) => Ok((a - b).norm()),
            (Point::Hyperbolic(a), Point::Hyperbolic(b)) => Ok(hyperbolic_distance(a, b)),
            _ => Err(DirichletError::KindMismatch),
        }
    }
}

/// `arcosh(−⟨a, b⟩)`, evaluated through `sinh` for nearby points.
pub fn hyperbolic_distance(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    let d = a - b;
    let chord2 = minkowski_dot(&d, &d).max(0.0);
    // ⟨a−b, a−b⟩ = 2 cosh δ − 2 = 4 sinh²(δ/2)
    2.0 * (chord2.sqrt() / 2.0).asinh()
}

/// Hyperbolic distance from the origin to the point with Klein coordinates `k`.
pub fn klein_radius_to_distance(norm: f64) -> f64 {
    if norm >= 1.0 {
        f64::INFINITY
    } else {
        norm.atanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Isometry {
    Euclidean {
        rotation: Matrix3<f64>,
        translation: Vector3<f64>,
    },
    Lorentz {
        matrix: Matrix4<f64>,
    },
}

impl Isometry {
    pub fn identity(kind: GeometryKind) -> Isometry {
        match kind {
            GeometryKind::Euclidean => Isometry::Euclidean {
                rotation: Matrix3::identity(),
                translation: Vector3::zeros(),
            },
            GeometryKind::Lorentz => Isometry::Lorentz {
                matrix: Matrix4::identity(),
            },
        }
    }

    pub fn translation(v: Vector3<f64>) -> Isometry {
        Isometry::Euclidean {
            rotation: Matrix3::identity(),
            translation: v,
        }
    }

    /// Rotation by `angle` about the line through the origin along `axis`,
    /// followed by translation `shift·axis`.
    pub fn screw(axis: Vector3<f64>, angle: f64, shift: f64) -> Isometry {
        let axis = Unit::new_normalize(axis);
        Isometry::Euclidean {
            rotation: *Rotation3::from_axis_angle(&axis, angle).matrix(),
            translation: axis.into_inner() * shift,
        }
    }

    /// Hyperbolic translation of length `rapidity` along the geodesic through
    /// the origin with direction `axis`.
    pub fn boost(axis: Vector3<f64>, rapidity: f64) -> Isometry {
        let n = axis.normalize();
        let (c, s) = (rapidity.cosh(), rapidity.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = c;
        for i in 0..3 {
            m[(0, i + 1)] = s * n[i];
            m[(i + 1, 0)] = s * n[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] += (c - 1.0) * n[i] * n[j];
            }
        }
        Isometry::Lorentz { matrix: m }
    }

    /// Elliptic rotation of `H³` about the geodesic through the origin along `axis`.
    pub fn lorentz_rotation(axis: Vector3<f64>, angle: f64) -> Isometry {
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle);
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(r.matrix());
        Isometry::Lorentz { matrix: m }
    }

    /// Loxodromic motion: rotation by `angle` about the axis followed by
    /// translation of length `shift` along it.
    pub fn lorentz_screw(axis: Vector3<f64>, angle: f64, shift: f64) -> Isometry {
        Isometry::boost(axis, shift)
            .compose(&Isometry::lorentz_rotation(axis, angle))
            .expect("both Lorentz")
    }

    /// The pure boost taking the origin to `p`.
    pub fn boost_to(p: &Vector4<f64>) -> Isometry {
        let x0 = p[0];
        let v = Vector3::new(p[1], p[2], p[3]);
        let mut m = Matrix4::identity();
        m[(0, 0)] = x0;
        for i in 0..3 {
            m[(0, i + 1)] = v[i];
            m[(i + 1, 0)] = v[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] += v[i] * v[j] / (1.0 + x0);
            }
        }
        Isometry::Lorentz { matrix: m }
    }

    pub fn kind(&self) -> GeometryKind {
        match self {
            Isometry::Euclidean { .. } => GeometryKind::Euclidean,
            Isometry::Lorentz { .. } => GeometryKind::Lorentz,
        }
    }

    /// Checks `RᵀR = I`, or `GᵀJG = J` together with preservation of the
    /// upper sheet.
    pub fn validate(&self) -> Result<(), DirichletError> {
        match self {
            Isometry::Euclidean { rotation, translation } => {
                if !rotation.iter().chain(translation.iter()).all(|c| c.is_finite()) {
                    return Err(DirichletError::InvalidIsometry("non-finite entries"));
                }
                let defect = (rotation.transpose() * rotation - Matrix3::identity()).amax();
                if defect > FORM_TOLERANCE {
                    return Err(DirichletError::InvalidIsometry("rotation part is not orthogonal"));
                }
                Ok(())
            }
            Isometry::Lorentz { matrix } => {
                if !matrix.iter().all(|c| c.is_finite()) {
                    return Err(DirichletError::InvalidIsometry("non-finite entries"));
                }
                let j = minkowski_form();
                let scale = matrix.amax().max(1.0);
                let defect = (matrix.transpose() * j * matrix - j).amax();
                if defect > FORM_TOLERANCE * scale * scale {
                    return Err(DirichletError::InvalidIsometry(
                        "matrix does not preserve the Minkowski form",
                    ));
                }
                if matrix[(0, 0)] < 1.0 - FORM_TOLERANCE * scale {
                    return Err(DirichletError::InvalidIsometry(
                        "matrix exchanges the hyperboloid sheets",
                    ));
                }
                Ok(())
            }
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, DirichletError> {
        match (self, other) {
            (
                Isometry::Euclidean {
                    rotation: r1,
                    translation: t1,
                },
                Isometry::Euclidean {
                    rotation: r2,
                    translation: t2,
                },
            ) => Ok(Isometry::Euclidean {
                rotation: r1 * r2,
                translation: r1 * t2 + t1,
            }),
            (Isometry::Lorentz { matrix: a }, Isometry::Lorentz { matrix: b }) => Ok(Isometry::Lorentz {
                matrix: reproject_lorentz(a * b),
            }),
            _ => Err(DirichletError::KindMismatch),
        }
    }

    pub fn invert(&self) -> Isometry {
        match self {
            Isometry::Euclidean { rotation, translation } => {
                let rt = rotation.transpose();
                Isometry::Euclidean {
                    rotation: rt,
                    translation: -(rt * translation),
                }
            }
            Isometry::Lorentz { matrix } => {
                // G⁻¹ = J Gᵀ J
                let j = minkowski_form();
                Isometry::Lorentz {
                    matrix: j * matrix.transpose() * j,
                }
            }
        }
    }

    pub fn apply(&self, p: &Point) -> Result<Point, DirichletError> {
        match (self, p) {
            (Isometry::Euclidean { rotation, translation }, Point::Euclidean(v)) => {
                Ok(Point::Euclidean(rotation * v + translation))
            }
            (Isometry::Lorentz { matrix }, Point::Hyperbolic(y)) => Ok(Point::Hyperbolic(matrix * y)),
            _ => Err(DirichletError::KindMismatch),
        }
    }

    /// Image of a chart point (Euclidean or Klein coordinates).
    pub fn apply_chart(&self, v: &Vector3<f64>) -> Vector3<f64> {
        match self {
            Isometry::Euclidean { rotation, translation } => rotation * v + translation,
            Isometry::Lorentz { matrix } => {
                let y = matrix * Vector4::new(1.0, v.x, v.y, v.z);
                Vector3::new(y[1], y[2], y[3]) / y[0]
            }
        }
    }

    /// Largest entrywise difference to another isometry of the same kind.
    pub fn max_difference(&self, other: &Isometry) -> f64 {
        match (self, other) {
            (
                Isometry::Euclidean {
                    rotation: r1,
                    translation: t1,
                },
                Isometry::Euclidean {
                    rotation: r2,
                    translation: t2,
                },
            ) => (r1 - r2).amax().max((t1 - t2).amax()),
            (Isometry::Lorentz { matrix: a }, Isometry::Lorentz { matrix: b }) => (a - b).amax(),
            _ => f64::INFINITY,
        }
    }
}

/// A closed half-space bounded by a totally geodesic plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HalfSpace {
    /// `{ y : normal·y ≤ offset }`.
    Euclidean { normal: Vector3<f64>, offset: f64 },
    /// `{ y : ⟨y, normal⟩ ≤ 0 }`.
    Lorentz { normal: Vector4<f64> },
}

impl HalfSpace {
    /// Signed value of the defining inequality, negative inside.
    pub fn evaluate(&self, p: &Point) -> Result<f64, DirichletError> {
        match (self, p) {
            (HalfSpace::Euclidean { normal, offset }, Point::Euclidean(v)) => Ok(normal.dot(v) - offset),
            (HalfSpace::Lorentz { normal }, Point::Hyperbolic(y)) => Ok(minkowski_dot(y, normal)),
            _ => Err(DirichletError::KindMismatch),
        }
    }

    pub fn contains(&self, p: &Point) -> Result<bool, DirichletError> {
        Ok(self.evaluate(p)? <= 0.0)
    }

    /// The same half-space as `n·k ≤ c` in chart coordinates.
    pub fn chart_plane(&self) -> (Vector3<f64>, f64) {
        match self {
            HalfSpace::Euclidean { normal, offset } => (*normal, *offset),
            HalfSpace::Lorentz { normal } => (Vector3::new(normal[1], normal[2], normal[3]), normal[0]),
        }
    }

    /// Image under an isometry.
    pub fn transform(&self, g: &Isometry) -> Result<HalfSpace, DirichletError> {
        match (self, g) {
            (HalfSpace::Euclidean { normal, offset }, Isometry::Euclidean { rotation, translation }) => {
                let n = rotation * normal;
                Ok(HalfSpace::Euclidean {
                    normal: n,
                    offset: offset + n.dot(translation),
                })
            }
            (HalfSpace::Lorentz { normal }, Isometry::Lorentz { matrix }) => Ok(HalfSpace::Lorentz {
                normal: matrix * normal,
            }),
            _ => Err(DirichletError::KindMismatch),
        }
    }
}

/// `{ y : d(y, x) ≤ d(y, g·x) }`.
pub fn bisector(x: &Point, g: &Isometry) -> Result<HalfSpace, DirichletError> {
    let gx = g.apply(x)?;
    match (x, &gx) {
        (Point::Euclidean(a), Point::Euclidean(b)) => {
            let n = b - a;
            if n.norm() < 1e-9 {
                return Err(DirichletError::FixedBasepoint);
            }
            Ok(HalfSpace::Euclidean {
                normal: n,
                offset: (b.norm_squared() - a.norm_squared()) / 2.0,
            })
        }
        (Point::Hyperbolic(a), Point::Hyperbolic(b)) => {
            if hyperbolic_distance(a, b) < 1e-9 {
                return Err(DirichletError::FixedBasepoint);
            }
            Ok(HalfSpace::Lorentz { normal: b - a })
        }
        _ => Err(DirichletError::KindMismatch),
    }
}

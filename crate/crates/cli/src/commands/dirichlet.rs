use std::path::PathBuf;

use clap::Args;
use conewerk::dirichlet::{
    dirichlet_domain, singular_dirichlet, word_string, DirichletDomain, FaceSource, GeometryKind, HalfSpace, Isometry,
    Point, SectorLift, DEFAULT_MAX_WORD_LENGTH,
};
use conewerk::qmc::{QmcConfig, MAX_POINTS_PER_REPLICATE};
use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::io::{check_input, check_output, read_json, status, write_json, Report};

const PAIRING_TOLERANCE: f64 = 1e-8;

#[derive(Args)]
pub struct DirichletArgs {
    /// Group description (group.json).
    #[arg(long)]
    group: PathBuf,
    /// QMC points per replicate for non-exact volumes.
    #[arg(long, default_value_t = MAX_POINTS_PER_REPLICATE)]
    qmc_points: u32,
    #[arg(long, default_value_t = 4)]
    replicates: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    kind: GeometryKind,
    generators: Vec<GeneratorSpec>,
    /// Euclidean coordinates, Klein coordinates or a hyperboloid point.
    basepoint: Vec<f64>,
    cutoff: f64,
    #[serde(default = "default_word_length")]
    max_word_length: usize,
    /// Lifts a cone manifold to the sector of this angle about the z-axis.
    #[serde(default)]
    cone_angle: Option<f64>,
}

fn default_word_length() -> usize {
    DEFAULT_MAX_WORD_LENGTH
}

/// Matrix rows plus a translation for Euclidean generators, a 4x4 matrix
/// for Lorentz ones.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorSpec {
    #[serde(default)]
    rotation: Option<[[f64; 3]; 3]>,
    #[serde(default)]
    translation: Option<[f64; 3]>,
    #[serde(default)]
    matrix: Option<[[f64; 4]; 4]>,
}

impl GeneratorSpec {
    fn build(&self, kind: GeometryKind, i: usize) -> Result<Isometry, CliError> {
        let field = |name: &str| format!("generators[{i}].{name}");
        let g = match kind {
            GeometryKind::Euclidean => {
                if self.matrix.is_some() {
                    return Err(CliError::schema(
                        field("matrix"),
                        "euclidean generators take rotation and translation",
                    ));
                }
                let t = self
                    .translation
                    .ok_or_else(|| CliError::schema(field("translation"), "missing translation"))?;
                let rotation = match self.rotation {
                    Some(rows) => Matrix3::from_fn(|r, c| rows[r][c]),
                    None => Matrix3::identity(),
                };
                Isometry::Euclidean {
                    rotation,
                    translation: Vector3::from(t),
                }
            }
            GeometryKind::Lorentz => {
                if self.rotation.is_some() || self.translation.is_some() {
                    return Err(CliError::schema(
                        field("matrix"),
                        "lorentz generators take a 4x4 matrix only",
                    ));
                }
                let rows = self
                    .matrix
                    .ok_or_else(|| CliError::schema(field("matrix"), "missing matrix"))?;
                Isometry::Lorentz {
                    matrix: Matrix4::from_fn(|r, c| rows[r][c]),
                }
            }
        };
        let which = if kind == GeometryKind::Euclidean {
            "rotation"
        } else {
            "matrix"
        };
        g.validate().map_err(|e| CliError::schema(field(which), e))?;
        Ok(g)
    }
}

fn basepoint(kind: GeometryKind, coords: &[f64]) -> Result<Point, CliError> {
    let p = match (kind, coords.len()) {
        (GeometryKind::Euclidean, 3) => Point::Euclidean(Vector3::from_column_slice(coords)),
        (GeometryKind::Lorentz, 3) => {
            let k = Vector3::from_column_slice(coords);
            if k.norm() >= 1.0 || !k.norm().is_finite() {
                return Err(CliError::schema(
                    "basepoint",
                    "Klein coordinates must have norm below 1",
                ));
            }
            Point::from_klein(&k)
        }
        (GeometryKind::Lorentz, 4) => Point::Hyperbolic(Vector4::from_column_slice(coords)),
        _ => {
            return Err(CliError::schema(
                "basepoint",
                "expected 3 coordinates, or 4 for a hyperboloid point",
            ))
        }
    };
    p.validate().map_err(|e| CliError::schema("basepoint", e))?;
    Ok(p)
}

#[derive(Serialize)]
struct FaceOut {
    index: usize,
    cell: usize,
    source: FaceSource,
    /// Word of the element whose bisector carries the face.
    word: Option<String>,
    vertices: Vec<[f64; 3]>,
    truncated: bool,
}

#[derive(Serialize)]
struct PairingOut {
    face: usize,
    partner: usize,
    word: String,
    vertex_error: Option<f64>,
}

#[derive(Serialize)]
struct Verification {
    pairing_involution: &'static str,
    max_vertex_error: f64,
    vertex_tolerance: f64,
    hull_defect: f64,
    passed: bool,
}

#[derive(Serialize)]
struct DomainOut {
    kind: GeometryKind,
    basepoint_chart: [f64; 3],
    cutoff: f64,
    cone_angle: Option<f64>,
    max_word_length: usize,
    elements: usize,
    half_spaces: Vec<HalfSpace>,
    faces: Vec<FaceOut>,
    pairings: Vec<PairingOut>,
    volume: f64,
    volume_std_error: f64,
    volume_exact: bool,
    convex: bool,
    truncated: bool,
    slab_width: Option<f64>,
    vertex_cycles: usize,
    verification: Verification,
}

fn summarize(d: &DirichletDomain, max_word_length: usize) -> DomainOut {
    let faces = d
        .faces
        .iter()
        .enumerate()
        .map(|(index, f)| FaceOut {
            index,
            cell: f.cell,
            source: f.source,
            word: match f.source {
                FaceSource::Bisector { element } => Some(word_string(&d.elements[element].word)),
                FaceSource::Wedge { .. } => None,
            },
            vertices: f.vertices.iter().map(|v| [v.x, v.y, v.z]).collect(),
            truncated: f.truncated,
        })
        .collect();
    let involution = d.pairings.iter().all(|p| d.partner_of(p.partner) == Some(p.face));
    let max_vertex_error = d.pairings.iter().filter_map(|p| p.vertex_error).fold(0.0, f64::max);
    let hull_defect = d.hull_defect();
    let c = d.basepoint.chart();
    DomainOut {
        kind: d.kind,
        basepoint_chart: [c.x, c.y, c.z],
        cutoff: d.cutoff,
        cone_angle: d.cone_angle,
        max_word_length,
        elements: d.elements.len(),
        half_spaces: d.half_spaces.clone(),
        faces,
        pairings: d
            .pairings
            .iter()
            .map(|p| PairingOut {
                face: p.face,
                partner: p.partner,
                word: p.word.clone(),
                vertex_error: p.vertex_error,
            })
            .collect(),
        volume: d.volume.value,
        volume_std_error: d.volume.std_error,
        volume_exact: d.volume.exact,
        convex: d.convex,
        truncated: d.truncated,
        slab_width: d.slab_width,
        vertex_cycles: d.vertex_cycles,
        verification: Verification {
            pairing_involution: status(involution),
            max_vertex_error,
            vertex_tolerance: PAIRING_TOLERANCE,
            hull_defect,
            passed: involution && max_vertex_error <= PAIRING_TOLERANCE && hull_defect <= PAIRING_TOLERANCE,
        },
    }
}

pub fn run(args: DirichletArgs, seed: u64) -> Result<bool, CliError> {
    check_input(&args.group, "group")?;
    check_output(args.out.as_ref(), "out")?;
    if !(1..=MAX_POINTS_PER_REPLICATE).contains(&args.qmc_points) {
        return Err(CliError::schema(
            "qmc-points",
            format!("must lie in 1..={MAX_POINTS_PER_REPLICATE}"),
        ));
    }
    if args.replicates == 0 {
        return Err(CliError::schema("replicates", "must be at least 1"));
    }
    let file: GroupFile = read_json(&args.group, "group")?;
    let generators = file
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| g.build(file.kind, i))
        .collect::<Result<Vec<_>, _>>()?;
    let x = basepoint(file.kind, &file.basepoint)?;
    let qmc = QmcConfig {
        replicates: args.replicates,
        points_per_replicate: args.qmc_points,
        seed: (seed ^ (seed >> 32)) as u32,
    };
    let domain = match file.cone_angle {
        None => dirichlet_domain(&generators, &x, file.cutoff, file.max_word_length, &qmc)?,
        Some(alpha) => singular_dirichlet(
            &SectorLift::new(alpha)?,
            &generators,
            &x,
            file.cutoff,
            file.max_word_length,
            &qmc,
        )?,
    };
    let out = summarize(&domain, file.max_word_length);
    let passed = out.verification.passed;
    write_json(args.out.as_ref(), &Report::new("dirichlet", seed, out))?;
    Ok(passed)
}

use std::path::{Path, PathBuf};

use clap::Args;
use conewerk::analysis_tools::{gh_correspondence, PointedSample};
use serde::Serialize;

use crate::error::CliError;
use crate::io::{check_input, check_output, read_matrix, write_json, Report};

#[derive(Args)]
pub struct GhArgs {
    /// Distance matrix of the first space (headerless CSV).
    #[arg(long)]
    a: PathBuf,
    /// Distance matrix of the second space.
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 0)]
    basepoint_a: usize,
    #[arg(long, default_value_t = 0)]
    basepoint_b: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct GhBody {
    points_a: usize,
    points_b: usize,
    basepoints: (usize, usize),
    /// Half the distortion of the optimal correspondence.
    value: f64,
    distortion: f64,
    correspondence: Vec<(usize, usize)>,
}

fn load(path: &Path, basepoint: usize, flag: &str) -> Result<PointedSample, CliError> {
    check_input(path, flag)?;
    let d = read_matrix(path, flag)?;
    PointedSample::new(d, basepoint).map_err(|e| {
        let inner = e.field().unwrap_or("distances");
        CliError::schema(format!("{flag}.{inner}"), e)
    })
}

pub fn run(args: GhArgs, seed: u64) -> Result<bool, CliError> {
    check_output(args.out.as_ref(), "out")?;
    let a = load(&args.a, args.basepoint_a, "a")?;
    let b = load(&args.b, args.basepoint_b, "b")?;
    let m = gh_correspondence(&a, &b)?;
    let body = GhBody {
        points_a: a.len(),
        points_b: b.len(),
        basepoints: (a.basepoint, b.basepoint),
        value: m.value,
        distortion: m.distortion,
        correspondence: m.correspondence,
    };
    write_json(args.out.as_ref(), &Report::new("gh", seed, body))?;
    Ok(true)
}

use std::path::PathBuf;

use clap::Args;
use conewerk::analysis_tools::{build_smoothing, max_smoothing_eps, SmoothingProfile};
use serde::Serialize;

use crate::error::CliError;
use crate::io::{check_output, status, write_csv, write_json, Report};

/// Slack allowed on concavity and on the sign of the curvature.
const SIGN_TOLERANCE: f64 = 1e-12;

#[derive(Args)]
pub struct SmoothArgs {
    /// Slope of the outer line, in (1/2, 1).
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 1.0)]
    r0: f64,
    /// Offset of the outer line; half the admissible maximum when omitted.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 101)]
    rows: usize,
    /// CSV table; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary of the profile.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct SmoothBody {
    profile: SmoothingProfile,
    max_eps: f64,
    peak_curvature_at: f64,
    peak_curvature: f64,
    rows: usize,
    concave: &'static str,
    nonnegative_curvature: &'static str,
}

pub fn run(args: SmoothArgs, seed: u64) -> Result<bool, CliError> {
    check_output(args.out.as_ref(), "out")?;
    check_output(args.report.as_ref(), "report")?;
    if args.rows == 0 {
        return Err(CliError::schema("rows", "must be at least 1"));
    }
    let max_eps = max_smoothing_eps(args.t, args.r0);
    let eps = args.eps.unwrap_or(max_eps / 2.0);
    let p = build_smoothing(args.t, args.r0, eps)?;
    let table = p.table(args.rows);
    let header = ["r", "f", "df", "d2f", "curvature"].map(String::from);
    let rows: Vec<Vec<f64>> = table.iter().map(|s| vec![s.r, s.f, s.df, s.d2f, s.curvature]).collect();
    write_csv(args.out.as_ref(), &header, &rows)?;
    let concave = table.iter().all(|s| s.d2f <= SIGN_TOLERANCE);
    let nonnegative = table.iter().all(|s| s.f > 0.0 && s.curvature >= -SIGN_TOLERANCE);
    if let Some(report) = &args.report {
        let (at, peak) = p.peak_curvature();
        let body = SmoothBody {
            profile: p,
            max_eps,
            peak_curvature_at: at,
            peak_curvature: peak,
            rows: args.rows,
            concave: status(concave),
            nonnegative_curvature: status(nonnegative),
        };
        write_json(Some(report), &Report::new("smooth", seed, body))?;
    }
    Ok(concave && nonnegative)
}

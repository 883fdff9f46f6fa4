use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::Args;
use conewerk::trace_deformation::{
    angle_schedule, classify_filling, curve_residual, curve_residual_scaled, smooth_point_rank, theta_param,
    BranchingData, DehnCoefficient, FillingType, Real,
};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::io::{check_input, check_output, read_json, status, write_csv, write_json, Report};

/// Largest accepted scaled residual of a Θ sample.
const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Args)]
pub struct TraceArgs {
    /// Branching indices, e.g. 2,3,7.
    #[arg(long, value_delimiter = ',', conflicts_with = "branching")]
    m: Option<Vec<u32>>,
    /// Signs ±1 for each index; all +1 when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "m")]
    eps: Option<Vec<i8>>,
    /// Branching data as JSON `{ "m": [...], "eps": [...] }`.
    #[arg(long)]
    branching: Option<PathBuf>,
    /// Number of random parameters `w`.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// `|w|` is drawn uniformly from `[0, radius)`.
    #[arg(long, default_value_t = 10.0)]
    radius: f64,
    /// Filling coefficient `inf`, `p,q` or `p,q,irrational`; repeatable.
    #[arg(long = "coefficient")]
    coefficients: Vec<String>,
    /// Angle-schedule parameter in [0, 1], e.g. 1/2.
    #[arg(long)]
    schedule_t: Option<String>,
    /// Cone orders for the angle schedule; the branching indices when omitted.
    #[arg(long, value_delimiter = ',')]
    schedule_n: Option<Vec<u32>>,
    /// CSV of samples; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary with residuals and classifications.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct Classification {
    coefficient: String,
    filling: FillingType,
    cone_angle: Option<f64>,
}

#[derive(Serialize)]
struct Schedule {
    t: String,
    orders: Vec<u32>,
    entries: Vec<Classification>,
}

#[derive(Serialize)]
struct TraceBody {
    m: Vec<u32>,
    eps: Vec<i8>,
    samples: usize,
    radius: f64,
    max_residual: f64,
    max_residual_abs: f64,
    residual_tolerance: f64,
    residuals: &'static str,
    smooth_point_rank: usize,
    classifications: Vec<Classification>,
    schedule: Option<Schedule>,
}

fn parse_coefficient(s: &str, i: usize) -> Result<DehnCoefficient, CliError> {
    let field = format!("coefficient[{i}]");
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(DehnCoefficient::Infinity);
    }
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let real = |t: &str| t.parse::<Real>().map_err(|e| CliError::schema(field.clone(), e));
    match parts[..] {
        [p, q] => Ok(DehnCoefficient::new(real(p)?, real(q)?)),
        [p, q, "irrational"] => Ok(DehnCoefficient::irrational(real(p)?.to_f64(), real(q)?.to_f64())),
        _ => Err(CliError::schema(
            field,
            format!("expected inf, p,q or p,q,irrational; got {s:?}"),
        )),
    }
}

fn classify(c: &DehnCoefficient, field: String) -> Result<Classification, CliError> {
    let filling = classify_filling(c).map_err(|e| CliError::schema(field, e))?;
    Ok(Classification {
        coefficient: c.to_string(),
        filling,
        cone_angle: filling.cone_angle(),
    })
}

pub fn run(args: TraceArgs, seed: u64) -> Result<bool, CliError> {
    if let Some(p) = &args.branching {
        check_input(p, "branching")?;
    }
    check_output(args.out.as_ref(), "out")?;
    check_output(args.report.as_ref(), "report")?;
    if !(args.radius.is_finite() && args.radius > 0.0) {
        return Err(CliError::schema("radius", "must be positive and finite"));
    }
    let needs_report = !args.coefficients.is_empty() || args.schedule_t.is_some();
    if needs_report && args.report.is_none() {
        return Err(CliError::schema(
            "report",
            "classifications are written to the JSON report",
        ));
    }
    let data = match (&args.branching, &args.m) {
        (Some(p), _) => read_json::<BranchingData>(p, "branching")?,
        (None, Some(m)) => match &args.eps {
            Some(eps) => BranchingData::new(m.clone(), eps.clone())?,
            None => BranchingData::with_positive_signs(m.clone())?,
        },
        (None, None) => return Err(CliError::schema("m", "give --m or --branching")),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(args.samples);
    let (mut worst, mut worst_abs) = (0.0f64, 0.0f64);
    for i in 0..args.samples {
        let w = Complex64::from_polar(rng.random_range(0.0..args.radius), rng.random_range(0.0..TAU));
        let z = theta_param(&data, w);
        let scaled = curve_residual_scaled(&data, &z)?;
        let abs = curve_residual(&data, &z)?;
        worst = worst.max(scaled);
        worst_abs = worst_abs.max(abs);
        let mut row = vec![i as f64, w.re, w.im];
        row.extend(z.iter().flat_map(|c| [c.re, c.im]));
        row.extend([scaled, abs]);
        rows.push(row);
    }
    let mut header: Vec<String> = ["sample", "w_re", "w_im"].map(String::from).to_vec();
    for k in 1..=data.q() {
        header.push(format!("z{k}_re"));
        header.push(format!("z{k}_im"));
    }
    header.extend(["residual", "residual_abs"].map(String::from));
    write_csv(args.out.as_ref(), &header, &rows)?;
    let passed = worst < RESIDUAL_TOLERANCE;

    if let Some(report) = &args.report {
        let classifications = args
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, s)| classify(&parse_coefficient(s, i)?, format!("coefficient[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let schedule = match &args.schedule_t {
            None => None,
            Some(t) => {
                let real: Real = t.parse().map_err(|e| CliError::schema("schedule-t", e))?;
                let orders = args.schedule_n.clone().unwrap_or_else(|| data.m.clone());
                let entries = angle_schedule(&orders, real)?
                    .iter()
                    .enumerate()
                    .map(|(i, c)| classify(c, format!("schedule-n[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Schedule {
                    t: real.to_string(),
                    orders,
                    entries,
                })
            }
        };
        let body = TraceBody {
            m: data.m.clone(),
            eps: data.eps.clone(),
            samples: args.samples,
            radius: args.radius,
            max_residual: worst,
            max_residual_abs: worst_abs,
            residual_tolerance: RESIDUAL_TOLERANCE,
            residuals: status(passed),
            smooth_point_rank: smooth_point_rank(&data),
            classifications,
            schedule,
        };
        write_json(Some(report), &Report::new("trace", seed, body))?;
    }
    Ok(passed)
}

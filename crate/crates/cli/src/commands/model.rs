use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::Args;
use conewerk::coverings::{constants, ConstantsLedger};
use conewerk::model_spaces::{
    arc_iteration_limit, ball_volume, ball_volume_fermi, cosh_k, fermi_metric_coeffs, injectivity_constants, sinh_k,
    tanh_k, ConeAngle, Curvature, InjectivityContext,
};
use serde::Serialize;

use crate::error::CliError;
use crate::io::{check_output, status, write_json, Constant, Report};

/// Largest accepted relative gap between closed-form and Fermi-integrated volumes.
const VOLUME_TOLERANCE: f64 = 1e-8;

#[derive(Args)]
pub struct ModelArgs {
    /// Sectional curvature in [-1, 0].
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    curvature: f64,
    /// Cone angle in (0, 2π]; 2π when omitted.
    #[arg(long)]
    alpha: Option<f64>,
    /// Radii for the metric and volume table.
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 1.0, 2.0])]
    radii: Vec<f64>,
    /// Emit the covering constants ledger instead of the table.
    #[arg(long)]
    constants: bool,
    /// Right end of the interval on which the volume comparison constant is taken.
    #[arg(long, default_value_t = 8.0)]
    a_end: f64,
    /// Injectivity context `a,omega,R`; adds its constants to the ledger.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    injectivity: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Row {
    r: f64,
    sinh_k: f64,
    cosh_k: f64,
    tanh_k: f64,
    g_rr: f64,
    g_theta_theta: f64,
    g_hh: f64,
    ball_volume: f64,
    ball_volume_fermi: f64,
    relative_gap: f64,
}

#[derive(Serialize)]
struct TableBody {
    curvature: f64,
    alpha: f64,
    rows: Vec<Row>,
    arc_iteration_limit: f64,
    volume_tolerance: f64,
    volumes_agree: &'static str,
}

#[derive(Serialize)]
struct LedgerBody {
    a_interval_end: f64,
    constants: Vec<Constant>,
    checks: Vec<LedgerCheck>,
    passed: bool,
}

#[derive(Serialize)]
struct LedgerCheck {
    name: &'static str,
    status: &'static str,
}

pub fn run(args: ModelArgs, seed: u64) -> Result<bool, CliError> {
    check_output(args.out.as_ref(), "out")?;
    if args.constants {
        return ledger(&args, seed);
    }
    let k = Curvature::new(args.curvature)?;
    let alpha = ConeAngle::new(args.alpha.unwrap_or(TAU))?;
    if let Some(i) = args.radii.iter().position(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(CliError::schema(
            format!("radii[{i}]"),
            "radii must be positive and finite",
        ));
    }
    let rows: Vec<Row> = args
        .radii
        .iter()
        .map(|&r| {
            let (g_rr, g_theta_theta, g_hh) = fermi_metric_coeffs(k, alpha, r);
            let closed = ball_volume(k, alpha, r);
            let fermi = ball_volume_fermi(k, alpha, r);
            Row {
                r,
                sinh_k: sinh_k(k, r),
                cosh_k: cosh_k(k, r),
                tanh_k: tanh_k(k, r),
                g_rr,
                g_theta_theta,
                g_hh,
                ball_volume: closed,
                ball_volume_fermi: fermi,
                relative_gap: (closed - fermi).abs() / closed,
            }
        })
        .collect();
    let agree = rows.iter().all(|r| r.relative_gap <= VOLUME_TOLERANCE);
    let body = TableBody {
        curvature: k.value(),
        alpha: alpha.value(),
        rows,
        arc_iteration_limit: arc_iteration_limit(k),
        volume_tolerance: VOLUME_TOLERANCE,
        volumes_agree: status(agree),
    };
    write_json(args.out.as_ref(), &Report::new("model", seed, body))?;
    Ok(agree)
}

fn ledger_constants(c: &ConstantsLedger) -> Vec<Constant> {
    let mut out = vec![
        Constant::new(
            "a",
            c.a,
            "smallest a with t^3/a <= V_{-1}(t) <= a t^3 for t in (0, a_interval_end]",
        ),
        Constant::new("N", c.n as f64, "ceil(sup over r in (0,1] of V_{-1}(8r)/V_{-1}(r/4))"),
    ];
    for (k, x) in c.xi.iter().enumerate() {
        out.push(Constant::new(format!("xi_{k}"), *x, "16 sqrt(2(k+1))/3"));
    }
    out.extend([
        Constant::new(
            "eta0_bound",
            c.eta0_bound,
            "Vol(standard 3-simplex)/((N+1)(4 xi_3/3)^3)",
        ),
        Constant::new("eta0", c.eta0, "eta0_bound/2"),
        Constant::new("b0", c.b0, "2^15 pi a^2"),
        Constant::new("b1", c.b1, "2^21 b0"),
        Constant::new("D0", c.d0, "max(b0/eta0, 300)"),
        Constant::new("D1", c.d1, "max(b1/eta0, 10^4)"),
    ]);
    out
}

fn ledger(args: &ModelArgs, seed: u64) -> Result<bool, CliError> {
    let c = constants(args.a_end)?;
    let mut list = ledger_constants(&c);
    if let Some(v) = &args.injectivity {
        let [a, omega, big_r] = v[..] else {
            return Err(CliError::schema("injectivity", "expected three values a,omega,R"));
        };
        let ic = injectivity_constants(&InjectivityContext::new(a, omega, big_r)?);
        list.extend([
            Constant::new("c1", ic.c1, "lower bound for Vol(B(x, 1)) over the admissible cases"),
            Constant::new(
                "c2",
                ic.c2,
                "2 pi sinh^2(R+1), bounding the tube volume per unit singular length",
            ),
            Constant::new(
                "delta1",
                ic.delta1,
                "c1/c2, lower bound for the length of a short singular component",
            ),
        ]);
    }
    let checks = vec![
        LedgerCheck {
            name: "xi_3 = 16 sqrt(8)/3",
            status: status((c.xi[3] - 16.0 * 8f64.sqrt() / 3.0).abs() < 1e-12),
        },
        LedgerCheck {
            name: "eta0 < eta0_bound",
            status: status(c.eta0 < c.eta0_bound),
        },
        LedgerCheck {
            name: "D0 >= 300",
            status: status(c.d0 >= 300.0),
        },
        LedgerCheck {
            name: "D1 >= 10^4",
            status: status(c.d1 >= 1e4),
        },
    ];
    let passed = checks.iter().all(|ch| ch.status == "pass");
    let body = LedgerBody {
        a_interval_end: c.a_interval_end,
        constants: list,
        checks,
        passed,
    };
    write_json(args.out.as_ref(), &Report::new("model", seed, body))?;
    Ok(passed)
}

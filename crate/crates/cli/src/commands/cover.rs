use std::path::PathBuf;

use clap::{Args, ValueEnum};
use conewerk::coverings::{
    build_covering, constants, greedy_maximal_packing, lipschitz_audit, nerve, nerve_dimension_bound, partition_map,
    retract_to_skeleton, seeded_order, star_preimage_violations, verify_covering, xi, Barycentric, CoverMode,
    Exclusion, LipschitzReport, PropertyCheck, RetractionConfig, SpaceSpec,
};
use serde::Serialize;

use crate::error::CliError;
use crate::io::{check_input, check_output, read_json, status, write_json, write_text, Constant, Report};

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Plain,
    Tubes,
    Anchor,
}

#[derive(Args)]
pub struct CoverArgs {
    /// Sampled space (space.json).
    #[arg(long)]
    space: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Plain)]
    mode: Mode,
    /// Tube radius around the singular marks in `tubes` mode.
    #[arg(long)]
    mu: Option<f64>,
    /// Centers placed first, in order; the first one owns the anchor.
    #[arg(long, value_delimiter = ',')]
    mandatory: Vec<usize>,
    /// Volume bound to check against instead of the measured one.
    #[arg(long)]
    eta_target: Option<f64>,
    /// Dimension of the skeleton to retract onto.
    #[arg(long, default_value_t = 2)]
    skeleton: usize,
    /// Lattice resolution when searching for gap points.
    #[arg(long, default_value_t = 16)]
    mesh: u32,
    /// Sample pairs for the Lipschitz audit.
    #[arg(long, default_value_t = 10_000)]
    lipschitz_pairs: usize,
    /// Right end of the interval for the volume comparison constant.
    #[arg(long, default_value_t = 8.0)]
    a_end: f64,
    /// covering.json; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Graphviz file for the 1-skeleton of the nerve.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Serialize)]
struct Property {
    status: &'static str,
    violations: usize,
    worst: f64,
}

impl From<&PropertyCheck> for Property {
    fn from(p: &PropertyCheck) -> Self {
        Property {
            status: status(p.passed),
            violations: p.violations,
            worst: p.worst,
        }
    }
}

#[derive(Serialize)]
struct Properties {
    containment: Property,
    radius_ratio: Property,
    quarter_disjoint: Property,
    deep_cover: Property,
    volume: Property,
    exclusive: Option<Property>,
}

#[derive(Serialize)]
struct SetOut {
    center: usize,
    radius: f64,
    members: usize,
}

#[derive(Serialize)]
struct NerveOut {
    vertices: usize,
    dimension: isize,
    dimension_bound: u64,
    status: &'static str,
    facets: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct PartitionOut {
    status: &'static str,
    error: Option<String>,
    lipschitz: Option<LipschitzReport>,
}

#[derive(Serialize)]
struct RetractionOut {
    target_dimension: usize,
    status: &'static str,
    error: Option<String>,
    simplices_processed: usize,
    smallest_gap: Option<f64>,
    star_preimage_violations: Option<usize>,
}

#[derive(Serialize)]
struct CoverBody {
    points: usize,
    mode: CoverMode,
    sets: Vec<SetOut>,
    eta: f64,
    eta_target: Option<f64>,
    exclusions: Vec<Exclusion>,
    properties: Properties,
    nerve: NerveOut,
    partition: PartitionOut,
    retraction: RetractionOut,
    constants: Vec<Constant>,
    passed: bool,
}

pub fn run(args: CoverArgs, seed: u64) -> Result<bool, CliError> {
    check_input(&args.space, "space")?;
    check_output(args.out.as_ref(), "out")?;
    check_output(args.dot.as_ref(), "dot")?;
    if let Some(eta) = args.eta_target {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(CliError::schema("eta-target", "must be positive and finite"));
        }
    }
    let mode = match (args.mode, args.mu) {
        (Mode::Plain, None) => CoverMode::Plain,
        (Mode::Anchor, None) => CoverMode::ExcludeAnchor,
        (Mode::Tubes, Some(mu)) => CoverMode::ExcludeSingularTubes { mu },
        (Mode::Tubes, None) => return Err(CliError::schema("mu", "tubes mode needs --mu")),
        (_, Some(_)) => return Err(CliError::schema("mu", "only tubes mode takes --mu")),
    };
    let ledger = constants(args.a_end)?;
    let spec: SpaceSpec = read_json(&args.space, "space")?;
    let space = spec.build()?;

    let centers = greedy_maximal_packing(&space, &seeded_order(space.len(), seed), &args.mandatory)?;
    let cov = build_covering(&space, &centers, mode)?;
    let report = verify_covering(&space, &cov, args.eta_target);
    let nv = nerve(&cov);
    let bound = nerve_dimension_bound();
    let nerve_ok = nv.dimension() >= 0 && nv.dimension() as u64 <= bound;

    let mapped: Result<Vec<Barycentric>, _> = (0..space.len()).map(|p| partition_map(&cov, p)).collect();
    let (partition, retraction) = match &mapped {
        Err(e) => (
            PartitionOut {
                status: status(false),
                error: Some(e.to_string()),
                lipschitz: None,
            },
            RetractionOut {
                target_dimension: args.skeleton,
                status: status(false),
                error: Some("no partition map".into()),
                simplices_processed: 0,
                smallest_gap: None,
                star_preimage_violations: None,
            },
        ),
        Ok(mapped) => {
            let lip = lipschitz_audit(&space, &cov, &nv, mapped, args.lipschitz_pairs, seed);
            let cfg = RetractionConfig {
                mesh: args.mesh,
                ..RetractionConfig::default()
            };
            let retraction = match retract_to_skeleton(&nv, mapped, args.skeleton, &cfg) {
                Ok(out) => {
                    let violations = star_preimage_violations(&cov, &nv, &out.points);
                    let within = out.points.iter().all(|f| f.coords.len() <= args.skeleton + 1);
                    RetractionOut {
                        target_dimension: args.skeleton,
                        status: status(violations == 0 && within),
                        error: None,
                        simplices_processed: out.simplices_processed,
                        smallest_gap: out.smallest_gap.is_finite().then_some(out.smallest_gap),
                        star_preimage_violations: Some(violations),
                    }
                }
                Err(e) => RetractionOut {
                    target_dimension: args.skeleton,
                    status: status(false),
                    error: Some(e.to_string()),
                    simplices_processed: 0,
                    smallest_gap: None,
                    star_preimage_violations: None,
                },
            };
            (
                PartitionOut {
                    status: status(lip.passed),
                    error: None,
                    lipschitz: Some(lip),
                },
                retraction,
            )
        }
    };

    let passed = report.all_pass()
        && nerve_ok
        && partition.status == "pass"
        && retraction.status == "pass"
        && ledger.eta0 < ledger.eta0_bound;
    let k = nv.dimension().max(0) as usize;
    let constants = vec![
        Constant::new(
            "N",
            ledger.n as f64,
            "ceil(sup over r in (0,1] of V_{-1}(8r)/V_{-1}(r/4))",
        ),
        Constant::new(
            format!("xi_{k}"),
            xi(k),
            "16 sqrt(2(k+1))/3 at the measured nerve dimension k",
        ),
        Constant::new(
            "a",
            ledger.a,
            "smallest a with t^3/a <= V_{-1}(t) <= a t^3 for t in (0, a_interval_end]",
        ),
        Constant::new("eta0", ledger.eta0, "Vol(standard 3-simplex)/((N+1)(4 xi_3/3)^3)/2"),
        Constant::new("D0", ledger.d0, "max(2^15 pi a^2/eta0, 300)"),
        Constant::new("D1", ledger.d1, "max(2^36 pi a^2/eta0, 10^4)"),
        Constant::new(
            "eta_min",
            report.eta_min,
            "smallest eta with Vol(V_i) <= eta r_i^3 for every set",
        ),
    ];
    let body = CoverBody {
        points: space.len(),
        mode,
        sets: cov
            .centers
            .iter()
            .zip(&cov.radii)
            .zip(&cov.members)
            .map(|((&center, &radius), m)| SetOut {
                center,
                radius,
                members: m.len(),
            })
            .collect(),
        eta: cov.eta,
        eta_target: args.eta_target,
        exclusions: cov.exclusions.clone(),
        properties: Properties {
            containment: (&report.containment).into(),
            radius_ratio: (&report.radius_ratio).into(),
            quarter_disjoint: (&report.quarter_disjoint).into(),
            deep_cover: (&report.deep_cover).into(),
            volume: (&report.volume).into(),
            exclusive: report.exclusive.as_ref().map(Property::from),
        },
        nerve: NerveOut {
            vertices: nv.vertex_count,
            dimension: nv.dimension(),
            dimension_bound: bound,
            status: status(nerve_ok),
            facets: nv.facets.clone(),
        },
        partition,
        retraction,
        constants,
        passed,
    };
    write_json(args.out.as_ref(), &Report::new("cover", seed, body))?;
    if let Some(dot) = &args.dot {
        write_text(Some(dot), &nv.to_dot())?;
    }
    Ok(passed)
}

//! `conewerk`: batch front end writing JSON, CSV and DOT reports.
//!
//! Exit status is 0 on success, 2 when the input is malformed and 3 when a
//! numeric verification fails (the report is still written).

mod commands;
mod error;
mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "conewerk", version, about = "Cone-manifold geometry toolkit")]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Metric coefficients, ball volumes and the constants ledger.
    Model(commands::model::ModelArgs),
    /// Dirichlet domain of a group read from JSON.
    Dirichlet(commands::dirichlet::DirichletArgs),
    /// Samples of the trace curve and Dehn filling classification.
    Trace(commands::trace::TraceArgs),
    /// Catalogue of Euclidean local models and soul classification.
    Models(commands::models::ModelsArgs),
    /// Covering pipeline on a sampled space.
    Cover(commands::cover::CoverArgs),
    /// Table of the smoothed warping profile.
    Smooth(commands::smooth::SmoothArgs),
    /// Optimal pointed correspondence between two finite metric spaces.
    Gh(commands::gh::GhArgs),
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CONEWERK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::schema("CONEWERK_THREADS", format!("expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let seed = cli.seed;
    match cli.command {
        Command::Model(a) => commands::model::run(a, seed),
        Command::Dirichlet(a) => commands::dirichlet::run(a, seed),
        Command::Trace(a) => commands::trace::run(a, seed),
        Command::Models(a) => commands::models::run(a, seed),
        Command::Cover(a) => commands::cover::run(a, seed),
        Command::Smooth(a) => commands::smooth::run(a, seed),
        Command::Gh(a) => commands::gh::run(a, seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            let note = serde_json::json!({
                "schema_version": io::SCHEMA_VERSION,
                "error": { "kind": "verification", "message": "numeric verification failed; see the report" },
            });
            eprintln!("{note}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

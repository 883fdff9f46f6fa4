use std::path::PathBuf;

use clap::{Args, Subcommand};
use conewerk::euclidean_models::{
    catalogue, classify_soul, euclidean_triples, margulis_type, tube_volume, CatalogueEntry, LocalModel,
    LocalModelName, MargulisType, SoulDescriptor,
};
use serde::Serialize;

use crate::error::CliError;
use crate::io::{check_input, check_output, read_json, write_json, Report};

#[derive(Args)]
pub struct ModelsArgs {
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand)]
enum Action {
    /// Print the full catalogue of local models.
    List {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a soul descriptor (soul.json).
    Classify {
        #[arg(long)]
        soul: PathBuf,
        /// Tube radius for the normal-bundle volume.
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ListBody {
    euclidean_triangle_triples: Vec<[u32; 3]>,
    models: Vec<CatalogueEntry>,
}

#[derive(Serialize)]
struct ClassifyBody {
    soul: SoulDescriptor,
    model: LocalModelName,
    notation: &'static str,
    group: &'static str,
    margulis_type: MargulisType,
    double_cover: Option<LocalModel>,
    nu: Option<f64>,
    tube_volume: Option<f64>,
}

pub fn run(args: ModelsArgs, seed: u64) -> Result<bool, CliError> {
    match args.action {
        Action::List { out } => {
            check_output(out.as_ref(), "out")?;
            let body = ListBody {
                euclidean_triangle_triples: euclidean_triples(),
                models: catalogue(),
            };
            write_json(out.as_ref(), &Report::new("models list", seed, body))?;
        }
        Action::Classify { soul, nu, out } => {
            check_input(&soul, "soul")?;
            check_output(out.as_ref(), "out")?;
            let descriptor: SoulDescriptor = read_json(&soul, "soul")?;
            let model = classify_soul(&descriptor)?;
            let tube = nu.map(|nu| tube_volume(&model, nu)).transpose()?;
            let body = ClassifyBody {
                soul: descriptor,
                model: model.name,
                notation: model.name.notation(),
                group: model.name.group(),
                margulis_type: margulis_type(model.name),
                double_cover: model.double_cover(),
                nu,
                tube_volume: tube,
            };
            write_json(out.as_ref(), &Report::new("models classify", seed, body))?;
        }
    }
    Ok(true)
}

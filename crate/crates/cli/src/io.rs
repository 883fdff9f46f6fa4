use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Common envelope of every JSON report.
#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub seed: u64,
    #[serde(flatten)]
    pub body: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, seed: u64, body: T) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            seed,
            body,
        }
    }
}

/// A computed constant together with the formula that defines it.
#[derive(Debug, Clone, Serialize)]
pub struct Constant {
    pub name: String,
    pub value: f64,
    pub definition: &'static str,
}

impl Constant {
    pub fn new(name: impl Into<String>, value: f64, definition: &'static str) -> Self {
        Constant {
            name: name.into(),
            value,
            definition,
        }
    }
}

pub fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

pub fn check_input(path: &Path, flag: &str) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::schema(
            flag,
            format!("{} is not a readable file", path.display()),
        ))
    }
}

pub fn check_output(path: Option<&PathBuf>, flag: &str) -> Result<(), CliError> {
    let Some(path) = path else { return Ok(()) };
    if path.is_dir() {
        return Err(CliError::schema(flag, format!("{} is a directory", path.display())));
    }
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(CliError::schema(
            flag,
            format!("directory {} does not exist", dir.display()),
        )),
        _ => Ok(()),
    }
}

/// Parses a JSON file, naming the offending field on failure.
pub fn read_json<T: DeserializeOwned>(path: &Path, flag: &str) -> Result<T, CliError> {
    let file = File::open(path).map_err(|e| CliError::schema(flag, e.to_string()))?;
    let mut de = serde_json::Deserializer::from_reader(BufReader::new(file));
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let field = if field == "." { flag.to_string() } else { field };
        CliError::schema(field, e.into_inner().to_string())
    })
}

/// Reads a square distance matrix stored as headerless CSV.
pub fn read_matrix(path: &Path, flag: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::schema(flag, e.to_string()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::schema(format!("{flag}[{i}]"), e.to_string()))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                cell.parse::<f64>()
                    .map_err(|_| CliError::schema(format!("{flag}[{i}][{j}]"), format!("not a number: {cell:?}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::io(p, e))?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_text(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    let mut w = sink(path)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path.map_or(Path::new("-"), |p| p.as_path()), e))
}

pub fn write_json<T: Serialize>(path: Option<&PathBuf>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    write_text(path, &text)
}

/// Shortest round-trip form, scientific outside `[1e-4, 1e15)`.
fn format_float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn write_csv(path: Option<&PathBuf>, header: &[String], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| format_float(x))).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    write_text(path, &String::from_utf8(bytes).expect("csv output is utf-8"))
}

use std::path::Path;
use std::process::ExitCode;

use conewerk::analysis_tools::AnalysisError;
use conewerk::coverings::CoveringError;
use conewerk::dirichlet::DirichletError;
use conewerk::euclidean_models::EuclideanError;
use conewerk::model_spaces::ModelError;
use conewerk::trace_deformation::TraceError;
use serde_json::json;

use crate::io::SCHEMA_VERSION;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inadmissible input.
    Schema {
        field: String,
        message: String,
    },
    /// A file could not be written.
    Io {
        path: String,
        message: String,
    },
    Internal(String),
}

impl CliError {
    pub fn schema(field: impl Into<String>, message: impl ToString) -> Self {
        CliError::Schema {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Schema { .. } => ExitCode::from(2),
            CliError::Io { .. } | CliError::Internal(_) => ExitCode::from(1),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let error = match self {
            CliError::Schema { field, message } => json!({ "kind": "schema", "field": field, "message": message }),
            CliError::Io { path, message } => json!({ "kind": "io", "path": path, "message": message }),
            CliError::Internal(message) => json!({ "kind": "internal", "message": message }),
        };
        json!({ "schema_version": SCHEMA_VERSION, "error": error })
    }
}

impl From<CoveringError> for CliError {
    fn from(e: CoveringError) -> Self {
        CliError::schema(e.field().unwrap_or("space"), e)
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::schema(e.field().unwrap_or("input"), e)
    }
}

impl From<DirichletError> for CliError {
    fn from(e: DirichletError) -> Self {
        let field = match &e {
            DirichletError::InvalidPoint(_) | DirichletError::FixedBasepoint | DirichletError::BasepointOffAxis => {
                "basepoint"
            }
            DirichletError::InvalidIsometry(_)
            | DirichletError::KindMismatch
            | DirichletError::NonDiscrete { .. }
            | DirichletError::DeckNotAxial(_) => "generators",
            DirichletError::TooManyElements(_) => "max_word_length",
            DirichletError::InvalidCutoff(_) => "cutoff",
            DirichletError::InvalidConeAngle(_) => "cone_angle",
            DirichletError::InvalidRadii => "radii",
            _ => "group",
        };
        CliError::schema(field, e)
    }
}

impl From<TraceError> for CliError {
    fn from(e: TraceError) -> Self {
        let field = match &e {
            TraceError::Branching(_) | TraceError::Length { .. } => "m",
            TraceError::ZeroCoefficient | TraceError::Coefficient(_) => "coefficient",
            TraceError::Schedule(_) => "schedule-t",
            TraceError::NotUnimodular(_) => "matrix",
        };
        CliError::schema(field, e)
    }
}

impl From<EuclideanError> for CliError {
    fn from(e: EuclideanError) -> Self {
        let field = match &e {
            EuclideanError::Metric { field, .. } => field,
            EuclideanError::MissingMetric(field) => field,
            EuclideanError::Angle(_) | EuclideanError::ConeData(_) | EuclideanError::NotEuclidean(_) => "angles",
            EuclideanError::Nu(_) => "nu",
            _ => "soul",
        };
        CliError::schema(field, e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let field = match &e {
            ModelError::Curvature(_) => "curvature",
            ModelError::ConeAngle(_) => "alpha",
            ModelError::Context(_) => "injectivity",
            _ => "radii",
        };
        CliError::schema(field, e)
    }
}

//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("position {x} outside the cavity interior [0, 1] (units of L)")]
    PositionOutsideCavity { x: f64 },

    #[error("high-Q cavity form requires 1 - r^2 <= 0.1, got {loss:.3}")]
    NotHighQ { loss: f64 },

    #[error("probe detuning {delta} outside tabulated range [{min}, {max}]")]
    FrequencyOutOfRange { delta: f64, min: f64, max: f64 },

    #[error("{model} model has no propagating channel; transmission/reflection undefined")]
    NoPropagatingChannel { model: &'static str },

    #[error("response pole: (Δ_A + iΓ'/2)𝟙 + g is singular at Δ_A = {delta}")]
    Pole { delta: f64 },

    #[error(
        "quasi-defective coupling matrix near an exceptional point: \
         |v^T v| = {norm:.3e} < 1e-10 for eigenvector {index}"
    )]
    QuasiDefective { index: usize, norm: f64 },

    #[error("Wronskian magnitude {magnitude:.3e} below tolerance; degenerate solve")]
    DegenerateWronskian { magnitude: f64 },

    #[error("evanescent overflow in region {region}: scale exponent {exponent:.1}")]
    EvanescentOverflow { region: usize, exponent: f64 },

    #[error("matrix exponential fallback failed: {0}")]
    MatrixExponential(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Exit-status category for the CLI: validation/usage problems map to 2,
    /// computational failures to 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::UnknownPreset(_) | Error::Json(_) => 2,
            _ => 1,
        }
    }
}

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-positive water depth h = {h:e}")]
    NonPositiveDepth { h: f64 },

    #[error("model breakdown: p + g h + c^2 = {radicand:e} is not positive (h = {h:e}, p = {p:e})")]
    ModelBreakdown { radicand: f64, h: f64, p: f64 },

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported polynomial degree {0} (supported: 0..=9)")]
    UnsupportedDegree(usize),

    #[error("point ({x}, {y}) lies outside the computational domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("tabulated data queried at {x} outside its range [{min}, {max}]")]
    Extrapolation { x: f64, min: f64, max: f64 },

    #[error("invalid tabulated data: {0}")]
    InvalidTable(String),

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("convergence order undefined between entries {index} and {next}: {reason}")]
    UndefinedOrder { index: usize, next: usize, reason: String },

    #[error("depth floor violated in cell {cell}, node {node}: h = {h:e} at t = {time}")]
    DepthFloor { cell: usize, node: usize, h: f64, time: f64 },

    #[error("space-time predictor diverged in cell {cell} (increment {increment:e} after {iterations} iterations)")]
    PredictorDiverged { cell: usize, iterations: usize, increment: f64 },

    #[error("non-finite signal speed at t = {time}")]
    NonFiniteSpeed { time: f64 },

    #[error("resonant similarity speed: |V - lambda| = {gap:e} for eigenvalue {eigenvalue}")]
    Resonance { eigenvalue: f64, gap: f64 },

    #[error("soliton integration failed: {0}")]
    Soliton(String),

    #[error("invalid relaxation input: {0}")]
    Relaxation(String),

    #[error("unknown scenario '{name}'; available: {available}")]
    UnknownScenario { name: String, available: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("run '{scenario}' failed at step {step}, t = {time}: {source}")]
    Run {
        scenario: String,
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

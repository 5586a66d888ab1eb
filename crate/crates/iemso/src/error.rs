//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("empty evaluated set: at least {required} evaluated point(s) required")]
    EmptyEvaluatedSet { required: usize },

    #[error("empty batch: at least {required} point(s) required")]
    EmptyBatch { required: usize },

    #[error("point {row} is out of bounds: coordinate {column} = {value} outside [{lower}, {upper}]")]
    OutOfBounds {
        row: usize,
        column: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("unknown problem '{0}'; supported: branin, rosenbrock, rastrigin, levy")]
    UnknownProblem(String),

    #[error("problem '{name}' does not support dimension {dim}: {reason}")]
    IllegalDimension {
        name: String,
        dim: usize,
        reason: String,
    },

    #[error("need at least {required} training points, got {actual}")]
    InsufficientData { required: usize, actual: usize },

    #[error("kernel matrix factorization failed even after raising jitter to {max_jitter}")]
    FactorizationFailure { max_jitter: f64 },

    #[error("batch size {k} exceeds candidate count {m}")]
    BatchTooLarge { k: usize, m: usize },

    #[error("degenerate candidate set: only {distinct} distinct point(s) for batch size {k}")]
    DegenerateCandidateSet { distinct: usize, k: usize },

    #[error("reference point ({r_mu}, {r_sigma}) is not weakly worse than score ({mu}, {sigma})")]
    InvalidReferencePoint {
        r_mu: f64,
        r_sigma: f64,
        mu: f64,
        sigma: f64,
    },

    #[error("index {index} out of range for {len} scores")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(
        "convergence-rate denominator at iteration {index} is {value}, which is not \
         strictly positive (> 1e-12); use the shifted variant for sequences that \
         touch or cross zero"
    )]
    ConvergenceDenominator { index: usize, value: f64 },

    #[error("need at least {required} values, got {actual}")]
    TooFewValues { required: usize, actual: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("trace line {line}: {message}")]
    TraceSchema { line: usize, message: String },

    #[error("trace line {line} is malformed JSON: {message} ({recovered} prior record(s) parsed)")]
    TraceParse {
        line: usize,
        message: String,
        recovered: usize,
    },

    #[error("csv header mismatch: expected `x1,...,xd,y` (optionally led by `iter`), got `{0}`")]
    CsvHeader(String),

    #[error("csv row {row}, column `{column}`: cannot parse `{value}` as a number")]
    CsvValue {
        row: usize,
        column: String,
        value: String,
    },

    #[error("run metadata mismatch across traces: {0}")]
    MetadataMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Other(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

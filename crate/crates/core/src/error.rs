use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, WitnessError>;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "degenerate separable bound F = {bound:e} (threshold {threshold:e}) for \
         alpha = {alpha}, beta = {beta}, gamma = {gamma}, N = {n}"
    )]
    DegenerateBound {
        alpha: f64,
        beta: f64,
        gamma: f64,
        n: usize,
        bound: f64,
        threshold: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bound is not exactly saturable for odd N = {0}")]
    NotSaturable(usize),

    #[error("size limit exceeded: N = {n}, maximum {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("optimization failed: {0}")]
    OptimizationFailed(String),

    #[error("no sign change found in [{lo}, {hi}]")]
    NotFound { lo: f64, hi: f64 },

    #[error("ground state is {0}-fold degenerate")]
    DegenerateGround(usize),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl WitnessError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        WitnessError::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        WitnessError::Io {
            path: path.into(),
            source,
        }
    }
}

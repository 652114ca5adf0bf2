use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Gauss-Lobatto rule supports 2..=12 nodes, got {0}")]
    QuadratureSize(usize),
    #[error("Gauss-Lobatto Newton iteration failed to converge for n = {n}, node {node}")]
    QuadratureNewton { n: usize, node: usize },
    #[error("mesh on ({lo}, {hi}) needs lo < hi and at least one cell")]
    BadMesh { lo: f64, hi: f64 },
    #[error("degenerate prior on cell {cell}: local mass matrix is numerically singular")]
    DegeneratePrior { cell: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("inadmissible state at t = {t}: {what}")]
    Inadmissible { t: f64, what: String },
    #[error("steady-state solve failed: {0}")]
    SteadySolve(String),
    #[error("weight file {path}: {what}")]
    WeightFile { path: String, what: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

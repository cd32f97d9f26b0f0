use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: fields live on different grids")]
    GridMismatch,
    #[error("negative power |∇|^{power} applied to a field with nonzero mean {mean:e}")]
    IllPosedSymbol { power: f64, mean: f64 },
    #[error("surface too steep for the extension solver: max|∇h| = {0} > 0.5")]
    SteepSurface(f64),
    #[error("extension solver did not converge: residual {residual:e} after {iterations} iterations")]
    DtnNonConvergence { residual: f64, iterations: usize },
    #[error("blow-up detected at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("snapshot format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

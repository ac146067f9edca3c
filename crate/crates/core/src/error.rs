use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("mesh too coarse: {interior} interior nodes cannot resolve {count} modes")]
    MeshTooCoarse { interior: usize, count: usize },
    #[error("incompatible grids")]
    GridMismatch,
    #[error("E_{n} = {energy} is degenerate; the width formula needs a simple eigenvalue")]
    Degenerate { n: usize, energy: f64 },
    #[error("E = {energy} is not embedded (E_1 = {threshold})")]
    NotEmbedded { energy: f64, threshold: f64 },
    #[error("E = {energy} lies within {gap:e} of the threshold E_{k}")]
    ThresholdCollision { k: usize, energy: f64, gap: f64 },
    #[error("resolvent pole: lambda = {lambda} is within the deflation window of mu = {mu}")]
    ResolventPole { lambda: f64, mu: f64 },
    #[error("function does not decay: |v({at})| = {tail:e}")]
    NonDecaying { at: f64, tail: f64 },
    #[error("spectral parameter {0} lies on the branch cut [0, inf) without a side marker")]
    BranchCut(Complex64),
    #[error("singular matrix at pivot {0}")]
    Singular(usize),
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
    #[error("no eigenvalue within {radius} of {target}")]
    NoEigenvalue { target: Complex64, radius: f64 },
    #[error("resonance lost between scan steps at epsilon = {epsilon}")]
    ResonanceLost { epsilon: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

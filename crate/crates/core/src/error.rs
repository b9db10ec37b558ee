use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("nonzero mean: |mean| = {mean:.3e} exceeds {tol:.3e}")]
    NonzeroMean { mean: f64, tol: f64 },
    #[error("mollifier unresolved: ell = {ell:.4e} is below two grid spacings ({min:.4e})")]
    KernelUnresolved { ell: f64, min: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("CFL violated: dt = {dt:.4e} exceeds {limit:.4e}")]
    Cfl { dt: f64, limit: f64 },
    #[error("blow-up guard: |v|_1 grew from {initial:.4e} to {current:.4e}")]
    BlowUp { initial: f64, current: f64 },
    #[error("flow-map hypothesis violated: |t - s| |v|_1 = {0:.4e} > 1")]
    FlowHypothesis(f64),
    #[error("degenerate flow map: min det(grad Phi) = {0:.4e}")]
    Degenerate(f64),
    #[error("{0}")]
    Guard(String),
    #[error("initial solutions have different means (difference {0:.3e})")]
    MeansDiffer(f64),
    #[error("initial data are not Euler solutions (residual {0:.3e})")]
    NotEuler(f64),
    #[error("Mikado tubes intersect: minimum line distance {distance:.4e} <= 2 r = {diameter:.4e}")]
    TubesIntersect { distance: f64, diameter: f64 },
    #[error("Mikado positivity fails at R = {r:?} (min Gamma^2 = {min:.3e})")]
    Positivity { r: [f64; 6], min: f64 },
    #[error("a^(b^q) exceeds the extended range (log10 = {0:.1})")]
    Overflow(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

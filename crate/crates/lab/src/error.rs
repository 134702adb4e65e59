use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] eckhaus_core::Error),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("fields live on different grids ({0} vs {1} points)")]
    GridMismatch(usize, usize),
    #[error("zero mode of the first component is {0:e}; θ⁻¹ is undefined there")]
    ZeroMode(f64),
    #[error("weight e^(μ|k|) overflows at k = {k} (μ = {mu})")]
    Overflow { k: f64, mu: f64 },
    #[error("blow-up guard tripped at t = {t}: sup norm {sup}")]
    BlowUp { t: f64, sup: f64 },
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
    #[error("time step {dt} outside the stability envelope (dt·max Re λ = {growth})")]
    UnstableStep { dt: f64, growth: f64 },
    #[error("phase winding {0} over the domain is not an integer")]
    Winding(f64),
    #[error("amplitude vanishes at X = {0}")]
    AmplitudeZero(f64),
    #[error("no hierarchy coefficient table for level {0}")]
    MissingTable(usize),
    #[error("analytic strip exhausted at level {level}: μ = {mu} at τ = {tau}")]
    StripExhausted { level: usize, mu: f64, tau: f64 },
    #[error("record stride is not uniform: {0}")]
    Stride(String),
    #[error("residual evaluations disagree by {0:e}")]
    ResidualMismatch(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LabError {
    /// Configuration problems are distinguished from numerical failures in
    /// the CLI exit code.
    pub fn is_config(&self) -> bool {
        matches!(self, LabError::Config(_))
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input `{name}` must be strictly positive (got {value})")]
    NonPositiveInput { name: &'static str, value: f64 },

    #[error("input `{name}` is out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },

    #[error("cavity detuning must be non-zero")]
    ZeroDetuning,

    #[error("temperature must be strictly positive (got {0} K)")]
    NonPositiveTemperature(f64),

    #[error("occupation must be strictly positive (got {0})")]
    NonPositiveOccupation(f64),

    #[error("dynamics are marginal or unstable at s_eps = {s_eps} (|s_eps| must stay below 1/2)")]
    MarginalStability { s_eps: f64 },

    #[error("time must be non-negative (got {0})")]
    NegativeTime(f64),

    #[error("noise factor C = {c} is inconsistent with xi = {xi}, n_m = {nbar} (expected {expected})")]
    InconsistentNoiseFactor { c: f64, xi: f64, nbar: f64, expected: f64 },

    #[error("no squeezing window: |s_eps| = {s_abs} is below the noise floor xi^2 = {xi_sq}")]
    NoSqueezingWindow { s_abs: f64, xi_sq: f64 },

    #[error("mean phonon number {0} is too small to normalize by")]
    ZeroPopulation(f64),

    #[error("time step {dt} does not resolve the drift: limit is {limit}")]
    StepTooCoarse { dt: f64, limit: f64 },

    #[error("covariance lost positive definiteness at t = {t}")]
    LostPositivity { t: f64 },

    #[error("trajectory is in the {found} basis, expected {expected}")]
    WrongBasis { expected: &'static str, found: &'static str },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("spectrum never drops to half maximum on the {side} side of the grid")]
    NoHalfCrossing { side: &'static str },

    #[error("Euler-Maruyama step dt*|lambda| = {0} exceeds the 0.1 stability margin")]
    UnstableStep(f64),

    #[error("diffusion matrix is not positive semidefinite")]
    NonPsdDiffusion,

    #[error("lag t + tau = {requested} extends beyond the simulated duration {duration}")]
    LagBeyondDuration { requested: f64, duration: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SipsError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid parameters for `{model}`: {reason}")]
    InvalidParameter { model: String, reason: String },

    #[error("level {level} out of range: only {bound_states} bound state(s)")]
    LevelOutOfRange { level: usize, bound_states: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: {n_points} points, need at least {required}")]
    GridTooCoarse { n_points: usize, required: usize },

    #[error("grid mismatch between operator and function")]
    GridMismatch,

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("model `{model}` is not in the SO(2,1) class: {diagnostic}")]
    NotSo21 { model: String, diagnostic: String },

    #[error("test function not negligible near the boundary (leak ratio {leak:.3e})")]
    BoundaryContamination { leak: f64 },

    #[error("negative radicand {radicand} at j = {j}, m = {m}: not in a unitary multiplet")]
    NegativeRadicand { j: f64, m: f64, radicand: f64 },

    #[error("bisection hit iteration cap for eigenvalue {index}: bracket [{lo}, {hi}]")]
    IterationCap { index: usize, lo: f64, hi: f64 },

    #[error("inverse iteration did not converge near E = {energy} (last change {change:.3e})")]
    NonConvergence { energy: f64, change: f64 },
}

pub type Result<T> = std::result::Result<T, SipsError>;

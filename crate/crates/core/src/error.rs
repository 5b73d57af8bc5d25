use thiserror::Error;

/// Errors produced by the solver and the analysis toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGridSize(usize),

    #[error("curl field must be mean-free (mean mode has magnitude {0:e})")]
    CurlNotMeanFree(f64),

    #[error("shell index {index} outside the range -1..={max}")]
    ShellOutOfRange { index: i32, max: i32 },

    #[error("low-pass index {0} must be nonnegative")]
    NegativeLowPass(i32),

    #[error("unsupported integrability index p = {0} (only 2 and infinity)")]
    UnsupportedIntegrability(f64),

    #[error("unsupported summation index r = {0} (only 1, 2 and infinity)")]
    UnsupportedSummation(f64),

    #[error("shell {0} is empty")]
    EmptyShell(i32),

    #[error("numerical blow-up at t = {t}")]
    NumericalBlowup { t: f64 },

    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("invalid step controller: {0}")]
    InvalidController(String),

    #[error("lifespan bound needs a positive denominator (all norms vanish)")]
    DegenerateNorms,

    #[error("degenerate: classical Euler regime (norm of (R0, b0) vanishes)")]
    DegenerateEuler,

    #[error("iterated-logarithm count {0} not one of 3, 4, 5")]
    InvalidIterationCount(u32),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("iteration scheme diverged at iterate {iterate} (L2 difference {difference:e})")]
    IterationDiverged { iterate: usize, difference: f64 },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

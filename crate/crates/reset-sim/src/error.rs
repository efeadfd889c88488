use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("parameter `{name}` violates constraint: {constraint} (value {value})")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("resonance singularity: |{which}| = {value:.3e} GHz is below 1e-6 GHz")]
    ResonanceSingularity { which: &'static str, value: f64 },

    #[error("trace contains no local minimum")]
    NoMinimum,

    #[error("rank-deficient design matrix: {0}")]
    RankDeficient(&'static str),

    #[error("degenerate decision boundary: class means coincide")]
    DegenerateBoundary,

    #[error("shot set is missing labels for class `{0}`")]
    MissingClass(&'static str),

    #[error("integrator did not converge: max population change {delta:.3e} on dt halving (tolerance {tol:.1e})")]
    NonConvergence { delta: f64, tol: f64 },

    #[error("timing error: {0}")]
    Timing(String),

    #[error("config key `{key}`: {problem}")]
    Config { key: String, problem: String },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code category for the CLI: config problems are 2,
    /// integrator non-convergence 3, I/O 4, everything else 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::ConfigParse(_) | Error::InvalidParameter { .. } => 2,
            Error::NonConvergence { .. } => 3,
            Error::Io(_) => 4,
            _ => 1,
        }
    }
}

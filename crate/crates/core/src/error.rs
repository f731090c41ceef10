use thiserror::Error;

/// Errors produced by the spectral kernels, the noise model and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}^3 vs {1}^3")]
    GridMismatch(usize, usize),

    #[error("grid resolution must be a positive even integer, got {0}")]
    InvalidResolution(usize),

    #[error("unsupported Sobolev order {0}; supported orders are 0, 1, 2")]
    UnsupportedOrder(i64),

    #[error("taming function argument must be nonnegative, got {0}")]
    NegativeTamingArgument(f64),

    #[error("taming threshold must be a nonnegative finite number, got {0}")]
    InvalidTamingThreshold(f64),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("mark space must have at least one mark with strictly positive finite weight: {0}")]
    InvalidMarkSpace(String),

    #[error("noise coefficient: {0}")]
    InvalidNoiseCoefficient(String),

    #[error("control value at interval {interval}, mark {mark} is invalid ({value}); values must be nonnegative and finite")]
    InvalidControlValue {
        interval: usize,
        mark: usize,
        value: f64,
    },

    #[error("control time grid: {0}")]
    InvalidControlGrid(String),

    #[error("rate scale must be strictly positive, got {0}")]
    InvalidRate(f64),

    #[error("noise scale epsilon must be strictly positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("solver configuration: {0}")]
    InvalidConfig(String),

    #[error("truncation mode count must be at least 1")]
    InvalidTruncation,

    #[error("solver state became nonfinite at t = {t}; last finite time {last_good}")]
    Blowup { t: f64, last_good: f64 },

    #[error(
        "Picard iteration did not reach tolerance {tol} within {max_iter} iterations; residuals {residuals:?}"
    )]
    PicardNoConvergence {
        max_iter: usize,
        tol: f64,
        residuals: Vec<f64>,
    },

    #[error("refinement ladder: {0}")]
    InvalidLadder(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {path}: {detail}")]
    Format { path: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            detail: detail.into(),
        }
    }
}

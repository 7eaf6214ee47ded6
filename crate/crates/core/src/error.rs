use thiserror::Error;

/// Errors produced anywhere in the evidence pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimensionality mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unsupported dimensionality {0} (only 1 and 2 are supported)")]
    UnsupportedDimension(usize),

    #[error("invalid basis set: {0}")]
    InvalidBasis(String),

    #[error("subset size {size} exceeds basis size {available}")]
    SubsetTooLarge { size: usize, available: usize },

    #[error("length mismatch: {what} has {actual} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("need more data points than parameters: N = {n}, l = {l}")]
    TooFewPoints { n: usize, l: usize },

    #[error("design matrix is rank deficient (rank {rank} < {l}); dependent columns: {}", columns.join(", "))]
    RankDeficient {
        rank: usize,
        l: usize,
        columns: Vec<String>,
    },

    #[error("argument out of domain in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("series for {function} did not converge after {iterations} terms")]
    SeriesNotConverged {
        function: &'static str,
        iterations: usize,
    },

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error estimate {error_estimate:e}, \
         {intervals} intervals ({detail})"
    )]
    QuadratureNotConverged {
        estimate: f64,
        error_estimate: f64,
        intervals: usize,
        detail: String,
    },

    #[error("evidence is not positive: log term1 = {log_term1}, log term2 = {log_term2}")]
    NonPositiveEvidence { log_term1: f64, log_term2: f64 },

    #[error("data are not centered: mean {mean:e}, rms {rms:e}")]
    NotCentered { mean: f64, rms: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("model table and fits do not come from the same evaluation: {0}")]
    ProvenanceMismatch(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("vector family does not span the space (smallest singular value {sigma_min:e} <= threshold {threshold:e})")]
    RankDeficient { sigma_min: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("probability p[{index}] = 1 makes the weight number undefined")]
    DegenerateProbability { index: usize },

    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("probability p[{index}] = {value} is outside [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("erasure multiplicity m = {m} must satisfy 1 <= m <= {len}")]
    BadMultiplicity { m: usize, len: usize },

    #[error("invalid erasure pattern: {0}")]
    InvalidPattern(String),

    #[error("frame is not tight (bounds {lower} and {upper})")]
    NotTight { lower: f64, upper: f64 },

    #[error("the second family is not a dual of the first (max deviation {0:e})")]
    NotDual(f64),

    #[error("sequence `{0}` is not sorted nonincreasing")]
    NotSorted(&'static str),

    #[error("majorization fails at partial sum k = {k}: {lhs} > {rhs}")]
    MajorizationFailed { k: usize, lhs: f64, rhs: f64 },

    #[error("spectrum entry {index} is {value}, expected a positive number")]
    NonPositiveSpectrum { index: usize, value: f64 },

    #[error("empty frame")]
    Empty,
}

pub type Result<T> = std::result::Result<T, FrameError>;

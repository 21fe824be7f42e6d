use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("warping profile is not positive: f({x}) = {value}")]
    NonPositiveProfile { x: f64, value: f64 },

    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {x} lies outside [0, 1]")]
    OutOfDomain { x: f64 },

    #[error("frequency lies on the Dirichlet spectrum: Delta(kappa_{m}) = {delta:e} at kappa = {kappa}")]
    FrequencyOnDirichletSpectrum { m: usize, kappa: f64, delta: f64 },

    #[error("integration failed near x = {x}: step size {step:e} underflowed")]
    IntegrationFailure { x: f64, step: f64 },

    #[error("z = {z} is at a root of the characteristic function (|Delta| = {magnitude:e})")]
    AtCharacteristicRoot { z: f64, magnitude: f64 },

    #[error("root {index} not bracketed: lo = {lo}, hi = {hi}, counts = ({count_lo}, {count_hi})")]
    RootSearchFailure {
        index: usize,
        lo: f64,
        hi: f64,
        count_lo: usize,
        count_hi: usize,
    },

    #[error("expansion order {order} too high: beta_{index} disagrees by {disagreement:e} under grid refinement")]
    OrderTooHigh {
        order: usize,
        index: usize,
        disagreement: f64,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("branch assignment is ambiguous: residual {best:e} vs alternative {alternative:e}")]
    BranchAmbiguity { best: f64, alternative: f64 },

    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),

    #[error("spectra are not comparable: {0}")]
    LengthMismatch(String),

    #[error("syntax error at offset {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("expression evaluation failed: {0}")]
    Evaluation(String),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Usage and configuration problems map to exit status 2, everything else to 1.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Config { .. } | Error::Syntax { .. } | Error::InvalidArgument(_) | Error::Json(_)
        )
    }
}

use thiserror::Error;

/// Errors surfaced by distribution, estimator, model and simulation code.
///
/// Fit failures are ordinary values here: the Monte Carlo harness records
/// them per run instead of aborting, so diagnostics carry the numbers that
/// caused the rejection.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {prob} outside valid range {range}")]
    InvalidProbability { prob: f64, range: &'static str },

    #[error("scale parameter must be positive, got {scale}")]
    NonPositiveScale { scale: f64 },

    #[error("rate must be positive, got {rate}")]
    NonPositiveRate { rate: f64 },

    #[error("shape {shape} out of range: {why}")]
    ShapeOutOfRange { shape: f64, why: &'static str },

    #[error("empty sample")]
    EmptySample,

    #[error("sample of length {len} too small, need at least {needed}")]
    SampleTooSmall { len: usize, needed: usize },

    #[error("degenerate sample: second L-moment is zero")]
    DegenerateSample,

    #[error("degenerate fit: {what}")]
    DegenerateFit { what: String },

    #[error("mean {l1} does not exceed threshold {threshold}")]
    ThresholdNotExceeded { l1: f64, threshold: f64 },

    #[error("fit failed for flood type {index}: {source}")]
    TypeFitFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("flood-type thresholds differ; peaks-over-threshold pooling needs a common threshold")]
    UnequalThresholds,

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid scenario: id {id} (want 1..=5), n_extreme {n_extreme} (want 0..=5)")]
    InvalidScenario { id: u8, n_extreme: u8 },

    #[error("return period must exceed 1 year, got {t}")]
    InvalidReturnPeriod { t: f64 },

    #[error("quantile undefined: probability {prob} does not exceed the mixture floor {floor}")]
    BelowMixtureFloor { prob: f64, floor: f64 },

    #[error("root bracketing failed: {what}")]
    BracketingFailed { what: &'static str },

    #[error("invalid configuration: {what}")]
    InvalidConfig { what: String },
}

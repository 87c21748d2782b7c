use alloc::string::String;
#[allow(unused_imports)]
use num_traits::Float;

/// Errors raised by the computational kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} outside the supported range {1}")]
    DimensionOutOfRange(usize, &'static str),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("quaternion is not a unit (|q|^2 = {0})")]
    NonUnitQuaternion(f64),
    #[error("group closure exceeded {0} elements")]
    ClosureOverflow(usize),
    #[error("invalid group parameter: {0}")]
    InvalidGroup(String),
    #[error("character is not multiplicative: {0}")]
    NotACharacter(String),
    #[error("vanishing denominator in defect sum")]
    VanishingDenominator,
    #[error("defect sum is not rational")]
    NotRational,
    #[error("point at radius {radius} lies outside the chart domain")]
    OutsideChart { radius: f64 },
    #[error("gauge map is not positive definite")]
    NonPositiveGauge,
    #[error("expansion order {0} is not supported here")]
    UnsupportedOrder(usize),
    #[error("dimension n = {0} is not covered by the trace induction (needs n > 3)")]
    DimensionTooSmall(usize),
    #[error("gauge ODE broke down at x = {0}")]
    GaugeBreakdown(f64),
    #[error("not enough samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("integration step {0} exceeds the maximum 1e-3")]
    StepTooLarge(f64),
    #[error("invalid series input: {0}")]
    InvalidSeries(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("singular matrix")]
    Singular,
    #[error("golden data: {0}")]
    Golden(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn outside(x: &[f64]) -> Self {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Error::OutsideChart { radius: r2.sqrt() }
    }
}

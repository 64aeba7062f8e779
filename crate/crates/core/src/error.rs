use thiserror::Error;

/// Errors raised by the algebraic and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GermError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("jet is not a unit (vanishing constant term)")]
    NotAUnit,
    #[error("composition at a point where the inner series does not vanish")]
    CompositionAtNonzeroPoint,
    #[error("jet vanishes identically at the available precision")]
    ZeroJet,
    #[error("degenerate frame: AD - BC vanishes at the available precision")]
    DegenerateFrame,
    #[error("coordinate change is not invertible")]
    NonInvertibleChange,
    #[error("transformed germ has a pole at the origin: {0}")]
    PoleAtOrigin(String),
    #[error("axis {0} is not invariant")]
    AxisNotInvariant(&'static str),
    #[error("blow-up is dicritical")]
    DicriticalInput,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("nonzero eigenvalue at the origin: {0}")]
    NonzeroEigenvalue(String),
    #[error("point lies on the exceptional locus of the chart transition")]
    OnExceptionalLocus,
    #[error("integration step failure at s = {at}: {reason}")]
    StepFailure { at: f64, reason: String },
    #[error("leaf lift left the configured polydisc at s = {at}")]
    LeafEscape { at: f64 },
    #[error("lifted loop does not close: defect {defect:e}")]
    NonClosedLift { defect: f64 },
}

pub type Result<T> = std::result::Result<T, GermError>;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised across the crate. Indices are 1-based, matching the
/// usual labelling `κ_1 > κ_2 > …` of the bound states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonDecreasingKappa: kappa is not strictly decreasing at index {index}")]
    NonDecreasingKappa { index: usize },
    #[error("NonPositiveEntry: {field}[{index}] must be positive and finite")]
    NonPositiveEntry { field: &'static str, index: usize },
    #[error("LengthMismatch: kappa has {kappa} entries but {field} has {other}")]
    LengthMismatch {
        field: &'static str,
        kappa: usize,
        other: usize,
    },
    #[error("InterlacingViolated: kappa and |mu| do not strictly interlace at index {index}")]
    InterlacingViolated { index: usize },
    #[error("SpecialPotential: |mu| coincides with a bound state near index {index}")]
    SpecialPotential { index: usize },
    #[error("IndexOutOfRange: index {index} outside 0..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("InvalidParams: {0}")]
    InvalidParams(&'static str),
    #[error("FactorizationFailure: equilibrated pivot {index} below working precision")]
    FactorizationFailure { index: usize },
    #[error("SingularSystem: complex pivot {index} below working precision")]
    SingularSystem { index: usize },
    #[error("DomainViolation: {0}")]
    DomainViolation(&'static str),
    #[error("PoleAtLambda: lambda sits on the pole attached to index {index}")]
    PoleAtLambda { index: usize },
    #[error("Overflow: exponent for index {index} exceeds the representable range")]
    Overflow { index: usize },
    #[error("ToleranceNotMet: step size underflow near x = {x}")]
    ToleranceNotMet { x: f64 },
    #[error("CountMismatch: expected {expected} bound states, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("GenericityFailure: interval {interval} has {fired} Dirichlet sign changes")]
    GenericityFailure { interval: usize, fired: usize },
    #[error("NonPositiveRadicand: three-spectra radicand for index {index} is not positive")]
    NonPositiveRadicand { index: usize },
    #[error("NewtonDivergence: no convergence after {iterations} iterations")]
    NewtonDivergence { iterations: usize },
    #[error("PoleHit: evaluation point coincides with a pole")]
    PoleHit,
    #[error("BracketFailure: no sign change bracketing zero {index}")]
    BracketFailure { index: usize },
}

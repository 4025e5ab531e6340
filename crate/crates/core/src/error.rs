use thiserror::Error;

use crate::dynamics::Trajectory;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid model combination: {0}")]
    InvalidCombination(String),
    #[error("phase point outside chart domain: {0}")]
    DomainError(String),
    #[error("gauge split undefined: {0}")]
    GaugeUndefined(String),
    #[error("invalid restriction: {0}")]
    InvalidRestriction(String),
    #[error("operation not supported for this model: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("chart singularity reached at t = {t}")]
    SingularityReached { t: f64, partial: Box<Trajectory> },
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("motion is unbound: {0}")]
    UnboundMotion(String),
    #[error("configuration is not reducible: {0}")]
    NotReducible(String),
    #[error("turning points are complex: discriminant {0}")]
    ComplexRoots(f64),
    #[error("no bound motion: {0}")]
    NoBoundMotion(String),
    #[error("interval crosses a classically forbidden region: {0}")]
    ForbiddenRegion(String),
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    #[error("series does not converge: {0}")]
    Nonconvergent(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSurface(_) => "InvalidSurface",
            Error::InvalidCombination(_) => "InvalidCombination",
            Error::DomainError(_) => "DomainError",
            Error::GaugeUndefined(_) => "GaugeUndefined",
            Error::InvalidRestriction(_) => "InvalidRestriction",
            Error::Unsupported(_) => "Unsupported",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::SingularityReached { .. } => "SingularityReached",
            Error::StepSizeUnderflow { .. } => "StepSizeUnderflow",
            Error::UnboundMotion(_) => "UnboundMotion",
            Error::NotReducible(_) => "NotReducible",
            Error::ComplexRoots(_) => "ComplexRoots",
            Error::NoBoundMotion(_) => "NoBoundMotion",
            Error::ForbiddenRegion(_) => "ForbiddenRegion",
            Error::DivergentIntegral(_) => "DivergentIntegral",
            Error::Nonconvergent(_) => "Nonconvergent",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

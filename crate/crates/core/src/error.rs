use thiserror::Error;

/// Errors raised by the geometry, integration and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space form: {0}")]
    InvalidSpaceForm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lambda = alpha/2 has no partner curvature (requires alpha^2 + 4c = 0)")]
    NoPartnerCurvature,

    #[error("operator is not Hopf (|beta| = {beta:e} exceeds tolerance)")]
    NotHopf { beta: f64 },

    #[error("sample list is empty")]
    EmptySamples,

    #[error("inadmissible state: {0}")]
    Inadmissible(String),

    #[error("beta fell below the floor {floor:e} at t = {t}")]
    BetaFloor { t: f64, floor: f64 },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("newton iteration for nu failed to converge at t = {t} (residual {residual:e})")]
    NewtonDivergence { t: f64, residual: f64 },

    #[error("fold point at t = {t}: constraint derivative in nu is {derivative:e}")]
    FoldPoint { t: f64, derivative: f64 },

    #[error("time grid must have at least {min} strictly increasing samples")]
    BadGrid { min: usize },

    #[error("coefficient lacks the partial derivatives needed for d")]
    MissingPartials,

    #[error("generators are linearly dependent at this state")]
    DependentGenerators,

    #[error("characteristic data: {0}")]
    Characteristic(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

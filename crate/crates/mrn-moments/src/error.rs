use mrn_network::NetworkError;
use thiserror::Error;

use crate::ode::OdeError;

#[derive(Debug, Error)]
pub enum MomentError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("closure produced a third/fourth-moment tensor that is not symmetric")]
    NonSymmetricClosure,
    #[error("log-normal closure undefined: mean of component {index} is {value} (must be positive)")]
    ZeroMean { index: usize, value: f64 },
    #[error("covariance lost positive semidefiniteness at t = {t}: smallest eigenvalue {eigenvalue:e}")]
    PsdViolation { t: f64, eigenvalue: f64 },
    #[error("step size underflow (h = {h:e}) at t = {t}; the moment equations are too stiff")]
    StepUnderflow { t: f64, h: f64 },
    #[error("too many integration steps before t = {0}")]
    TooManySteps(f64),
    #[error("moment equations produced non-finite values at t = {0}")]
    NonFinite(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<OdeError<MomentError>> for MomentError {
    fn from(e: OdeError<MomentError>) -> Self {
        match e {
            OdeError::Rhs(e) => e,
            OdeError::StepUnderflow { t, h } => MomentError::StepUnderflow { t, h },
            OdeError::TooManySteps { t, .. } => MomentError::TooManySteps(t),
            OdeError::NonFinite(t) => MomentError::NonFinite(t),
            OdeError::InvalidArgument(s) => MomentError::InvalidArgument(s),
        }
    }
}

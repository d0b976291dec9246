use mrn_moments::ode::OdeError;
use mrn_network::NetworkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LnaError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("reaction {reaction} has a {kind} propensity, which has no declared system-size scaling")]
    UnscaledPropensity { reaction: usize, kind: &'static str },
    #[error("macroscopic solution blew up at t = {t} (max |ζ| = {norm:e})")]
    BlowUp { t: f64, norm: f64 },
    #[error(
        "noise covariance blew up at t = {t} (trace {trace:e}); largest real part of the Jacobian spectrum is \
         {max_re_eigenvalue:.4}, so the macroscopic solution is not asymptotically stable"
    )]
    CovarianceBlowUp { t: f64, trace: f64, max_re_eigenvalue: f64 },
    #[error("step size underflow (h = {h:e}) at t = {t}")]
    StepUnderflow { t: f64, h: f64 },
    #[error("too many integration steps before t = {0}")]
    TooManySteps(f64),
    #[error("non-finite values at t = {0}")]
    NonFinite(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<OdeError<LnaError>> for LnaError {
    fn from(e: OdeError<LnaError>) -> Self {
        match e {
            OdeError::Rhs(e) => e,
            OdeError::StepUnderflow { t, h } => LnaError::StepUnderflow { t, h },
            OdeError::TooManySteps { t, .. } => LnaError::TooManySteps(t),
            OdeError::NonFinite(t) => LnaError::NonFinite(t),
            OdeError::InvalidArgument(s) => LnaError::InvalidArgument(s),
        }
    }
}

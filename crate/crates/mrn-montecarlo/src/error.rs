use mrn_network::NetworkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MonteCarloError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("propensity of reaction {reaction} is not finite at t = {t} in state {state:?}")]
    NonFinite { t: f64, reaction: usize, state: Vec<i64> },
    #[error("trajectory left the declared species bounds at t = {t}: {state:?}")]
    OutOfBounds { t: f64, state: Vec<i64> },
    #[error("leap size fell below {tau_min:e} at t = {t}; the network is too stiff for Poisson leaping")]
    Stiff { t: f64, tau_min: f64 },
    #[error("trajectory weight is not finite")]
    NonFiniteWeight,
    #[error("non-finite value in a real-valued path at t = {0}")]
    NonFinitePath(f64),
    #[error("time {t} lies outside the simulated horizon [0, {horizon}]")]
    OutsideHorizon { t: f64, horizon: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

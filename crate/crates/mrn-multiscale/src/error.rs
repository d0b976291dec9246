use mrn_montecarlo::MonteCarloError;
use mrn_network::NetworkError;
use mrn_statespace::StateSpaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MultiscaleError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    StateSpace(#[from] StateSpaceError),
    #[error(transparent)]
    MonteCarlo(#[from] MonteCarloError),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("slow reaction {reaction} depends nonlinearly on fast species, but the closure provides no covariances")]
    ClosureOrder { reaction: usize },
    #[error("closure failed at slow population {state:?}: {reason}")]
    ClosureFailure { state: Vec<i64>, reason: String },
    #[error("reduced trajectory left the declared species bounds at t = {t}: {state:?}")]
    OutOfBounds { t: f64, state: Vec<f64> },
    #[error("slow propensity {reaction} is not finite at slow population {state:?}")]
    NonFinite { reaction: usize, state: Vec<i64> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

use mrn_network::NetworkError;
use mrn_statespace::StateSpaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThermoError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    StateSpace(#[from] StateSpaceError),
    #[error("reaction {0} has no reverse partner")]
    MissingPairing(usize),
    #[error("reactions {0} and {1} are declared a reversible pair but their stoichiometries are not opposite")]
    InvalidPairing(usize, usize),
    #[error("probability vector is not normalized (sum {sum})")]
    NotNormalized { sum: f64 },
    #[error("the network is not at detailed balance: {0}")]
    NotBalanced(String),
    #[error("the state graph has {0} connected components; a single one is required")]
    Disconnected(usize),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

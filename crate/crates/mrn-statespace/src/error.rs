use thiserror::Error;

#[derive(Debug, Error)]
pub enum StateSpaceError {
    #[error(transparent)]
    Network(#[from] mrn_network::NetworkError),
    #[error("state space exceeds the cap of {cap} states; tighten the species bounds")]
    CapExceeded { cap: usize },
    #[error("state box too large to index")]
    IndexOverflow,
    #[error("reaction {reaction} leaves the state space from state {state:?} (strict truncation)")]
    NotClosed { state: Vec<i64>, reaction: usize },
    #[error("generator is not lower triangular (entry {row},{col})")]
    NotTriangular { row: usize, col: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("the generator is reducible; classify the state space first")]
    Reducible,
    #[error("eigenvector matrix is ill-conditioned (cond = {cond:.3e}); the generator is numerically defective, use propagate_ksa instead")]
    Defective { cond: f64 },
    #[error("problem too large for a dense method ({dim} states, limit {limit})")]
    TooLarge { dim: usize, limit: usize },
    #[error("singular transient block: structural inconsistency in the classification")]
    SingularTransientBlock,
    #[error("step control failed: {0}")]
    StepControl(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

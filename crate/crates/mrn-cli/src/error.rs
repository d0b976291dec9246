use mrn_lna::LnaError;
use mrn_maxent::MaxEntError;
use mrn_models::ModelError;
use mrn_moments::MomentError;
use mrn_montecarlo::MonteCarloError;
use mrn_multiscale::MultiscaleError;
use mrn_network::NetworkError;
use mrn_statespace::StateSpaceError;
use mrn_thermo::ThermoError;
use serde_json::json;
use thiserror::Error;

/// Failure of a command, classified by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid model, options or paths (exit 2).
    #[error("{0}")]
    Config(String),
    /// A solver failed (exit 3).
    #[error("{0}")]
    Numeric(String),
    /// The requested object does not exist, e.g. no maximum-entropy law
    /// matches the moments (exit 4).
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
            CliError::Infeasible(_) => "infeasible",
        }
    }

    /// Structured error line written to standard error.
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "exit_code": self.exit_code(), "message": self.to_string() } })
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("csv output error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("json error: {e}"))
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::NonFinite { .. } | NetworkError::ImpossibleDa { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<StateSpaceError> for CliError {
    fn from(e: StateSpaceError) -> Self {
        match e {
            StateSpaceError::Network(n) => n.into(),
            StateSpaceError::InvalidArgument(_)
            | StateSpaceError::CapExceeded { .. }
            | StateSpaceError::IndexOverflow
            | StateSpaceError::TooLarge { .. }
            | StateSpaceError::NotClosed { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<MonteCarloError> for CliError {
    fn from(e: MonteCarloError) -> Self {
        match e {
            MonteCarloError::Network(n) => n.into(),
            MonteCarloError::InvalidArgument(_) | MonteCarloError::OutsideHorizon { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<MomentError> for CliError {
    fn from(e: MomentError) -> Self {
        match e {
            MomentError::Network(n) => n.into(),
            MomentError::InvalidArgument(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<LnaError> for CliError {
    fn from(e: LnaError) -> Self {
        match e {
            LnaError::Network(n) => n.into(),
            LnaError::InvalidArgument(_) | LnaError::UnscaledPropensity { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<MaxEntError> for CliError {
    fn from(e: MaxEntError) -> Self {
        match e {
            MaxEntError::InvalidArgument(_) => CliError::Config(e.to_string()),
            _ => CliError::Infeasible(e.to_string()),
        }
    }
}

impl From<MultiscaleError> for CliError {
    fn from(e: MultiscaleError) -> Self {
        match e {
            MultiscaleError::Network(n) => n.into(),
            MultiscaleError::StateSpace(s) => s.into(),
            MultiscaleError::MonteCarlo(m) => m.into(),
            MultiscaleError::InvalidPartition(_)
            | MultiscaleError::ClosureOrder { .. }
            | MultiscaleError::InvalidArgument(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ThermoError> for CliError {
    fn from(e: ThermoError) -> Self {
        match e {
            ThermoError::Network(n) => n.into(),
            ThermoError::StateSpace(s) => s.into(),
            ThermoError::NotNormalized { .. } => CliError::Numeric(e.to_string()),
            ThermoError::NotBalanced(_) => CliError::Infeasible(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

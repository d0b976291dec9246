//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mrn", version, about = "Stochastic analysis of Markovian reaction networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transient population distribution by Krylov approximation of exp(tA)p.
    SolveKsa(SolveKsaArgs),
    /// Transient distribution by implicit Euler on the degree-of-advancement chain.
    SolveIe(SolveIeArgs),
    /// Monte Carlo ensemble (exact, weighted, Poisson or Langevin leaping).
    Simulate(SimulateArgs),
    /// Mean and covariance from closed moment equations.
    Moments(MomentsArgs),
    /// Linear noise approximation around the macroscopic solution.
    Lna(LnaArgs),
    /// Maximum-entropy reconstruction of a marginal from its moments.
    Maxent(MaxentArgs),
    /// Exact sampling of the slow reactions with a fast-subsystem closure.
    Multiscale(MultiscaleArgs),
    /// Energy, entropy, free energy and their rates along the master equation.
    Thermo(ThermoArgs),
    /// Stationary energy landscape E(x) and V(x).
    Landscape(LandscapeArgs),
    /// Transient and persistent classes of the population chain.
    Classify(ClassifyArgs),
    /// Writes a model file.
    Export(ExportArgs),
    /// Lists the built-in models.
    Models,
}

/// Options shared by every model-based command.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Built-in model `id[:preset]` or path to a JSON model file.
    #[arg(long)]
    pub model: String,
    /// Master seed of all random streams.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file (CSV); standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Output grid `0, Δt, …, t_end`.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Final time, in the model's time unit.
    #[arg(long)]
    pub t_end: f64,
    /// Output spacing (default t_end/100).
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveKsaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Final time, in the model's time unit.
    #[arg(long)]
    pub t_end: f64,
    /// Local error tolerance per unit time.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Krylov subspace dimension.
    #[arg(long, default_value_t = 40)]
    pub krylov_dim: usize,
    /// Largest state space to enumerate.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_states: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolveIeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub t_end: f64,
    /// Largest number of reaction events kept in the truncated chain.
    #[arg(long)]
    pub horizon: u64,
    /// Step size (default from the largest exit rate).
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 2_000_000)]
    pub max_states: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMethod {
    Ssa,
    Poisson,
    Langevin,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TauMode {
    Fixed,
    Bounded,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = SimMethod::Ssa)]
    pub method: SimMethod,
    #[arg(long, default_value_t = 1000)]
    pub trajectories: usize,
    /// Leap size (maximum leap with `--tau-mode bounded`).
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, value_enum, default_value_t = TauMode::Fixed)]
    pub tau_mode: TauMode,
    /// Propensity scalings for weighted sampling, one per reaction.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// Writes every trajectory as a JSON line.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Worker threads (capped by MRN_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentClosureArg {
    Normal,
    Lognormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = MomentClosureArg::Normal)]
    pub closure: MomentClosureArg,
    /// Clamp the expected convex propensities at zero.
    #[arg(long, value_enum, default_value_t = OnOff::Off)]
    pub jensen: OnOff,
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct LnaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// System size Ω.
    #[arg(long)]
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentSource {
    /// Marginal of the Krylov solution at t_end.
    Ksa,
    /// Stationary distribution of the population chain.
    Stationary,
    /// Sample moments of an exact ensemble at t_end.
    Ssa,
}

#[derive(Debug, Clone, Args)]
pub struct MaxentArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of moments K.
    #[arg(long)]
    pub order: usize,
    /// Species whose marginal is reconstructed.
    #[arg(long)]
    pub species: String,
    #[arg(long, value_enum, default_value_t = MomentSource::Ksa)]
    pub source: MomentSource,
    /// Time at which the moments are taken (ksa and ssa sources).
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Trajectories for the ssa source.
    #[arg(long, default_value_t = 4000)]
    pub trajectories: usize,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FastClosureArg {
    Dimer,
    Stationary,
    SsaNested,
}

#[derive(Debug, Clone, Args)]
pub struct MultiscaleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Fast reactions, by name or index.
    #[arg(long, value_delimiter = ',')]
    pub fast: Vec<String>,
    #[arg(long, value_enum, default_value_t = FastClosureArg::Dimer)]
    pub closure: FastClosureArg,
    #[arg(long, default_value_t = 1000)]
    pub trajectories: usize,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ThermoArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Size parameter Ω of the energies.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Floor of vanishing propensities inside logarithms.
    #[arg(long, default_value_t = 1e-30)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Writes the fundamental-cycle report (JSON).
    #[arg(long)]
    pub cycles: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

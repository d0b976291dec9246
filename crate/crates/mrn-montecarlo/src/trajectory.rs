use mrn_network::ReactionNetwork;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::MonteCarloError;

/// Random stream for trajectory `index` of an ensemble driven by `seed`.
///
/// Streams are independent ChaCha8 sequences, so ensemble members can be
/// generated in any order (or concurrently) with identical results.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrajectoryKind {
    /// Exact (Gillespie) sample of the master equation.
    Exact,
    /// Poisson leaping.
    Poisson,
    /// Euler–Maruyama discretisation of the Langevin equation; real-valued.
    Langevin,
}

impl TrajectoryKind {
    pub fn name(self) -> &'static str {
        match self {
            TrajectoryKind::Exact => "exact",
            TrajectoryKind::Poisson => "poisson",
            TrajectoryKind::Langevin => "langevin",
        }
    }
}

/// A sampled path of the degree-of-advancement (DA) process.
///
/// The path is piecewise constant: `da[i]` holds on `[times[i], times[i+1])`
/// (the last entry up to `t_end`). `times[0] = 0` and `da[0] = 0`. For exact
/// and Poisson paths every entry of `da` is a nonnegative integer.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kind: TrajectoryKind,
    pub seed: u64,
    /// Stream index within the seed (0 for single trajectories).
    pub stream: u64,
    pub t_end: f64,
    pub times: Vec<f64>,
    pub da: Vec<Vec<f64>>,
    /// For exact paths, `channels[i]` is the reaction fired at `times[i + 1]`.
    pub channels: Vec<usize>,
    /// Set when every propensity vanished before `t_end`.
    pub absorbed: bool,
    /// Number of rejected (halved) Poisson leaps.
    pub rejected_leaps: usize,
}

impl Trajectory {
    pub(crate) fn start(kind: TrajectoryKind, seed: u64, stream: u64, t_end: f64, n_reactions: usize) -> Self {
        Trajectory {
            kind,
            seed,
            stream,
            t_end,
            times: vec![0.0],
            da: vec![vec![0.0; n_reactions]],
            channels: Vec::new(),
            absorbed: false,
            rejected_leaps: 0,
        }
    }

    /// Number of recorded jumps (events for exact paths, steps otherwise).
    pub fn n_jumps(&self) -> usize {
        self.times.len() - 1
    }

    fn segment(&self, t: f64) -> Result<usize, MonteCarloError> {
        if !(0.0..=self.t_end).contains(&t) {
            return Err(MonteCarloError::OutsideHorizon { t, horizon: self.t_end });
        }
        Ok(self.times.partition_point(|s| *s <= t) - 1)
    }

    /// DA state at time `t` (right-continuous).
    pub fn da_at(&self, t: f64) -> Result<&[f64], MonteCarloError> {
        Ok(&self.da[self.segment(t)?])
    }

    /// Population state `x₀ + S z(t)`.
    pub fn population_at(&self, net: &ReactionNetwork, t: f64) -> Result<Vec<f64>, MonteCarloError> {
        Ok(net.da_to_population_real(self.da_at(t)?))
    }

    /// Population after every jump, aligned with `times`.
    pub fn population_path(&self, net: &ReactionNetwork) -> Vec<Vec<f64>> {
        self.da.iter().map(|z| net.da_to_population_real(z)).collect()
    }
}

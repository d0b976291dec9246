use mrn_network::ReactionNetwork;
use rayon::prelude::*;

use crate::leap::{run_langevin, run_poisson_leap, LangevinNoise, LeapOptions};
use crate::ssa::run_ssa;
use crate::trajectory::{trajectory_rng, TrajectoryKind};
use crate::MonteCarloError;

/// Sampler used for every member of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Ssa,
    /// Direct method with propensities scaled by `λ_m`; members carry
    /// likelihood-ratio weights.
    Weighted(Vec<f64>),
    Poisson(LeapOptions),
    Langevin { tau: f64 },
}

impl Method {
    pub fn kind(&self) -> TrajectoryKind {
        match self {
            Method::Ssa | Method::Weighted(_) => TrajectoryKind::Exact,
            Method::Poisson(_) => TrajectoryKind::Poisson,
            Method::Langevin { .. } => TrajectoryKind::Langevin,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleOptions {
    pub method: Method,
    pub trajectories: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl EnsembleOptions {
    pub fn new(method: Method, trajectories: usize, seed: u64) -> Self {
        EnsembleOptions { method, trajectories, seed, threads: None }
    }
}

/// Population samples of `L` trajectories on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    pub kind: TrajectoryKind,
    pub grid: Vec<f64>,
    pub n_species: usize,
    /// `samples[l][g * n_species + n]` is species `n` of trajectory `l` at
    /// `grid[g]`.
    pub samples: Vec<Vec<f64>>,
    /// Likelihood-ratio weights (all 1 unless biased).
    pub weights: Vec<f64>,
    /// Propensity scalings used for biased sampling.
    pub lambda: Option<Vec<f64>>,
    /// Total number of events (exact) or leaps (approximate).
    pub jumps: u64,
    /// Trajectories in which every propensity vanished before the horizon.
    pub absorbed: usize,
}

impl TrajectoryEnsemble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        *self.grid.last().expect("nonempty grid")
    }

    /// Population of trajectory `l` at grid point `g`.
    pub fn state(&self, l: usize, g: usize) -> &[f64] {
        &self.samples[l][g * self.n_species..(g + 1) * self.n_species]
    }

    pub fn is_weighted(&self) -> bool {
        self.lambda.is_some()
    }
}

/// Fills grid points `< t` with the state that held before a jump at `t`.
struct GridRecorder<'a> {
    grid: &'a [f64],
    next: usize,
    out: Vec<f64>,
}

impl<'a> GridRecorder<'a> {
    fn new(grid: &'a [f64], n_species: usize) -> Self {
        GridRecorder { grid, next: 0, out: Vec::with_capacity(grid.len() * n_species) }
    }

    fn advance<T: Copy + AsF64>(&mut self, t: f64, before: &[T]) {
        while self.next < self.grid.len() && self.grid[self.next] < t {
            self.out.extend(before.iter().map(|v| v.as_f64()));
            self.next += 1;
        }
    }

    fn finish<T: Copy + AsF64>(mut self, last: &[T]) -> Vec<f64> {
        self.advance(f64::INFINITY, last);
        self.out
    }
}

trait AsF64 {
    fn as_f64(self) -> f64;
}

impl AsF64 for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}

impl AsF64 for i64 {
    fn as_f64(self) -> f64 {
        self as f64
    }
}

fn check_grid(grid: &[f64]) -> Result<(), MonteCarloError> {
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite() || *t < 0.0) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(MonteCarloError::InvalidArgument("grid must be nonempty, finite, nonnegative and sorted".into()));
    }
    if grid[grid.len() - 1] <= 0.0 {
        return Err(MonteCarloError::InvalidArgument("grid must extend beyond t = 0".into()));
    }
    Ok(())
}

struct Member {
    samples: Vec<f64>,
    log_weight: f64,
    jumps: u64,
    absorbed: bool,
}

fn simulate_member(net: &ReactionNetwork, grid: &[f64], method: &Method, seed: u64, l: u64) -> Result<Member, MonteCarloError> {
    let t_end = grid[grid.len() - 1];
    let mut rng = trajectory_rng(seed, l);
    let n = net.n_species();
    let mut rec = GridRecorder::new(grid, n);
    match method {
        Method::Ssa | Method::Weighted(_) => {
            let lambda = match method {
                Method::Weighted(l) => Some(l.as_slice()),
                _ => None,
            };
            let mut x = net.x0();
            let out = run_ssa(net, t_end, lambda, &mut rng, |t, _, after| {
                rec.advance(t, &x);
                x.copy_from_slice(after);
            })?;
            Ok(Member {
                samples: rec.finish(&out.state),
                log_weight: out.log_weight,
                jumps: out.events as u64,
                absorbed: out.absorbed,
            })
        }
        Method::Poisson(opts) => {
            let mut x: Vec<f64> = net.x0().iter().map(|v| *v as f64).collect();
            let mut jumps = 0u64;
            let mut t_last = 0.0;
            run_poisson_leap(net, t_end, opts, &mut rng, |t, _, after| {
                rec.advance(t, &x);
                x.iter_mut().zip(after).for_each(|(a, b)| *a = *b as f64);
                jumps += 1;
                t_last = t;
            })?;
            Ok(Member { samples: rec.finish(&x), log_weight: 0.0, jumps, absorbed: t_last < t_end })
        }
        Method::Langevin { tau } => {
            let mut x: Vec<f64> = net.x0().iter().map(|v| *v as f64).collect();
            let mut jumps = 0u64;
            run_langevin(net, t_end, *tau, LangevinNoise::Gaussian, &mut rng, |t, _, after| {
                rec.advance(t, &x);
                x.copy_from_slice(after);
                jumps += 1;
            })?;
            Ok(Member { samples: rec.finish(&x), log_weight: 0.0, jumps, absorbed: false })
        }
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the
/// global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, MonteCarloError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(MonteCarloError::InvalidArgument("thread count must be positive".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| MonteCarloError::InvalidArgument(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Simulates `opts.trajectories` independent trajectories and records the
/// population of each at every point of `grid` (the horizon is the last grid
/// point). Member `l` uses stream `l` of `opts.seed`, so the result does not
/// depend on the number of threads.
pub fn simulate_ensemble(
    net: &ReactionNetwork,
    grid: &[f64],
    opts: &EnsembleOptions,
) -> Result<TrajectoryEnsemble, MonteCarloError> {
    check_grid(grid)?;
    if opts.trajectories == 0 {
        return Err(MonteCarloError::InvalidArgument("an ensemble needs at least one trajectory".into()));
    }
    let members: Vec<Member> = with_threads(opts.threads, || {
        (0..opts.trajectories as u64)
            .into_par_iter()
            .map(|l| simulate_member(net, grid, &opts.method, opts.seed, l))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let weights: Vec<f64> = members.iter().map(|m| m.log_weight.exp()).collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(MonteCarloError::NonFiniteWeight);
    }
    Ok(TrajectoryEnsemble {
        kind: opts.method.kind(),
        grid: grid.to_vec(),
        n_species: net.n_species(),
        jumps: members.iter().map(|m| m.jumps).sum(),
        absorbed: members.iter().filter(|m| m.absorbed).count(),
        weights,
        lambda: match &opts.method {
            Method::Weighted(l) => Some(l.clone()),
            _ => None,
        },
        samples: members.into_iter().map(|m| m.samples).collect(),
    })
}

//! Exact sampling of the reduced slow master equation.
//!
//! Slow propensities are recomputed after every slow event and held fixed
//! in between (the conditional means depend on time only through the slow
//! state once the fast subsystem has equilibrated).

use mrn_montecarlo::{trajectory_rng, with_threads, TrajectoryEnsemble, TrajectoryKind};
use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::{MultiscaleError, ReducedNetwork};

/// Summary of one reduced run.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedOutcome {
    pub events: usize,
    /// Every slow propensity vanished before the horizon.
    pub absorbed: bool,
    /// Slow DAs at the horizon (order of the partition's slow set).
    pub z_slow: Vec<u64>,
    /// Slow population `x₀ + S_s z_s` at the horizon.
    pub x_slow: Vec<i64>,
    /// Population estimate at the horizon.
    pub x_hat: Vec<f64>,
    /// Number of negative slow propensities clamped to zero.
    pub clamped: usize,
}

/// Runs the direct method on the slow reactions up to `t_end`.
///
/// `observer(t, m, x̂)` is called after every slow event with the firing
/// time, the (original) reaction index and the new population estimate.
/// With an empty fast set the random draws are consumed exactly as by
/// [`mrn_montecarlo::run_ssa`], so both produce the same path from the same
/// stream.
pub fn run_reduced_ssa<R, F>(
    red: &ReducedNetwork,
    t_end: f64,
    rng: &mut R,
    mut observer: F,
) -> Result<ReducedOutcome, MultiscaleError>
where
    R: Rng + ?Sized,
    F: FnMut(f64, usize, &[f64]),
{
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(MultiscaleError::InvalidArgument(format!("horizon must be positive and finite, got {t_end}")));
    }
    let net = red.network();
    let partition = red.partition();
    let slow = partition.slow();
    let mut x = net.x0();
    let mut z = vec![0u64; slow.len()];
    let mut props = red.propensities(&x)?;
    let mut clamped = props.clamped;
    let mut t = 0.0;
    let mut events = 0;
    let mut absorbed = false;
    loop {
        let total: f64 = props.alpha.iter().sum();
        if total <= 0.0 {
            absorbed = true;
            break;
        }
        let tau = rng.sample::<f64, _>(Exp1) / total;
        if t + tau > t_end {
            break;
        }
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = None;
        for (k, a) in props.alpha.iter().enumerate() {
            if *a > 0.0 {
                acc += a;
                chosen = Some(k);
                if target < acc {
                    break;
                }
            }
        }
        let k = chosen.expect("positive total propensity");
        let m = slow[k];
        t += tau;
        z[k] += 1;
        x.iter_mut().zip(net.stoich(m)).for_each(|(a, s)| *a += s);
        let escaped = x
            .iter()
            .zip(net.species())
            .enumerate()
            .any(|(n, (v, s))| !partition.is_fast_species(n) && (*v < s.min || *v > s.max));
        if escaped {
            return Err(MultiscaleError::OutOfBounds { t, state: x.iter().map(|v| *v as f64).collect() });
        }
        props = red.propensities(&x)?;
        clamped += props.clamped;
        events += 1;
        observer(t, m, &props.x_hat);
    }
    Ok(ReducedOutcome { events, absorbed, z_slow: z, x_slow: x, x_hat: props.x_hat, clamped })
}

/// A reduced trajectory: the population estimate after every slow event.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedTrajectory {
    pub seed: u64,
    pub stream: u64,
    pub t_end: f64,
    /// Event times, starting with 0.
    pub times: Vec<f64>,
    /// `x_hat[i]` holds on `[times[i], times[i+1])`.
    pub x_hat: Vec<Vec<f64>>,
    /// `channels[i]` is the reaction fired at `times[i + 1]`.
    pub channels: Vec<usize>,
    pub outcome: ReducedOutcome,
}

/// Reduced trajectory drawn from stream `stream` of `seed` (the stream
/// policy of the Monte Carlo samplers).
pub fn simulate_reduced(
    red: &ReducedNetwork,
    t_end: f64,
    seed: u64,
    stream: u64,
) -> Result<ReducedTrajectory, MultiscaleError> {
    let mut rng = trajectory_rng(seed, stream);
    let x0 = red.estimate(&red.network().x0())?;
    let (mut times, mut path, mut channels) = (vec![0.0], vec![x0], Vec::new());
    let outcome = run_reduced_ssa(red, t_end, &mut rng, |t, m, x| {
        times.push(t);
        path.push(x.to_vec());
        channels.push(m);
    })?;
    Ok(ReducedTrajectory { seed, stream, t_end, times, x_hat: path, channels, outcome })
}

struct Member {
    samples: Vec<f64>,
    events: u64,
    absorbed: bool,
}

fn simulate_member(red: &ReducedNetwork, grid: &[f64], seed: u64, l: u64) -> Result<Member, MultiscaleError> {
    let t_end = grid[grid.len() - 1];
    let n = red.network().n_species();
    let mut rng = trajectory_rng(seed, l);
    let mut current = red.estimate(&red.network().x0())?;
    let mut samples = Vec::with_capacity(grid.len() * n);
    let mut next = 0;
    let out = run_reduced_ssa(red, t_end, &mut rng, |t, _, after| {
        while next < grid.len() && grid[next] < t {
            samples.extend_from_slice(&current);
            next += 1;
        }
        current.copy_from_slice(after);
    })?;
    while next < grid.len() {
        samples.extend_from_slice(&current);
        next += 1;
    }
    Ok(Member { samples, events: out.events as u64, absorbed: out.absorbed })
}

/// Simulates `trajectories` reduced paths and records the population
/// estimate of each at every grid point (the horizon is the last grid
/// point). Member `l` uses stream `l` of `seed`, independently of `threads`.
pub fn simulate_reduced_ensemble(
    red: &ReducedNetwork,
    grid: &[f64],
    trajectories: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<TrajectoryEnsemble, MultiscaleError> {
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite() || *t < 0.0) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(MultiscaleError::InvalidArgument("grid must be nonempty, finite, nonnegative and sorted".into()));
    }
    if grid[grid.len() - 1] <= 0.0 {
        return Err(MultiscaleError::InvalidArgument("grid must extend beyond t = 0".into()));
    }
    if trajectories == 0 {
        return Err(MultiscaleError::InvalidArgument("an ensemble needs at least one trajectory".into()));
    }
    let members: Vec<Member> = with_threads(threads, || {
        (0..trajectories as u64)
            .into_par_iter()
            .map(|l| simulate_member(red, grid, seed, l))
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(TrajectoryEnsemble {
        kind: TrajectoryKind::Exact,
        grid: grid.to_vec(),
        n_species: red.network().n_species(),
        jumps: members.iter().map(|m| m.events).sum(),
        absorbed: members.iter().filter(|m| m.absorbed).count(),
        weights: vec![1.0; members.len()],
        lambda: None,
        samples: members.into_iter().map(|m| m.samples).collect(),
    })
}

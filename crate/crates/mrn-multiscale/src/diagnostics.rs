//! Diagnostics that help choose a partition and judge its payoff.

use std::time::Instant;

use mrn_montecarlo::{run_ssa, simulate_ensemble, trajectory_rng, EnsembleOptions, Method};
use mrn_network::ReactionNetwork;

use crate::{simulate_reduced_ensemble, MultiscaleError, ReducedNetwork};

/// Activity of one reaction along sampled paths.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionActivity {
    pub reaction: usize,
    pub name: String,
    /// Time-averaged propensity.
    pub mean_propensity: f64,
    /// Average number of firings per trajectory.
    pub events: f64,
}

/// Ranks reactions by their time-averaged propensity over `trajectories`
/// exact paths on `[0, t_end]` (most active first). Reactions that dominate
/// the ranking by orders of magnitude are candidates for the fast set.
pub fn propensity_ranking(
    net: &ReactionNetwork,
    t_end: f64,
    trajectories: usize,
    seed: u64,
) -> Result<Vec<ReactionActivity>, MultiscaleError> {
    if trajectories == 0 {
        return Err(MultiscaleError::InvalidArgument("at least one trajectory is needed".into()));
    }
    let m = net.n_reactions();
    let mut integral = vec![0.0; m];
    let mut counts = vec![0u64; m];
    for l in 0..trajectories as u64 {
        let mut rng = trajectory_rng(seed, l);
        let mut x = net.x0();
        let mut t_last = 0.0;
        let accumulate = |x: &[i64], dt: f64, integral: &mut [f64]| {
            for (r, acc) in integral.iter_mut().enumerate() {
                *acc += net.propensity(r, x) * dt;
            }
        };
        run_ssa(net, t_end, None, &mut rng, |t, r, after| {
            accumulate(&x, t - t_last, &mut integral);
            counts[r] += 1;
            t_last = t;
            x.copy_from_slice(after);
        })?;
        accumulate(&x, t_end - t_last, &mut integral);
    }
    let norm = trajectories as f64;
    let mut out: Vec<ReactionActivity> = (0..m)
        .map(|r| ReactionActivity {
            reaction: r,
            name: net.reactions()[r].name.clone(),
            mean_propensity: integral[r] / (norm * t_end),
            events: counts[r] as f64 / norm,
        })
        .collect();
    out.sort_by(|a, b| b.mean_propensity.total_cmp(&a.mean_propensity).then(a.reaction.cmp(&b.reaction)));
    Ok(out)
}

/// Wall-clock comparison of full and reduced ensembles.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupReport {
    pub full_seconds: f64,
    pub reduced_seconds: f64,
    pub full_events: u64,
    pub reduced_events: u64,
}

impl SpeedupReport {
    pub fn speedup(&self) -> f64 {
        self.full_seconds / self.reduced_seconds
    }
}

/// Times `trajectories` exact and reduced paths over `grid` with the same
/// seed and thread setting.
pub fn measure_speedup(
    red: &ReducedNetwork,
    grid: &[f64],
    trajectories: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<SpeedupReport, MultiscaleError> {
    let start = Instant::now();
    let opts = EnsembleOptions { threads, ..EnsembleOptions::new(Method::Ssa, trajectories, seed) };
    let full = simulate_ensemble(red.network(), grid, &opts)?;
    let full_seconds = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let reduced = simulate_reduced_ensemble(red, grid, trajectories, seed, threads)?;
    let reduced_seconds = start.elapsed().as_secs_f64();
    Ok(SpeedupReport { full_seconds, reduced_seconds, full_events: full.jumps, reduced_events: reduced.jumps })
}

//! Avalanches in a piecewise-constant activity path `A(t) ≥ 0`.
//!
//! An avalanche is a maximal interval `[t, t + τ)` on which `A > 0`, such
//! that `A` vanishes on some interval `[t − ε, t)` just before it and
//! `A(t + τ) = 0` right after it. Excursions already under way at the start
//! of the record, or still under way at its end, are not counted. An
//! optional window bounds the duration `τ` of a counted avalanche.

use mrn_network::ReactionNetwork;
use rayon::prelude::*;

use crate::ensemble::with_threads;
use crate::ssa::{check_horizon, run_ssa};
use crate::trajectory::trajectory_rng;
use crate::MonteCarloError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvalancheCount {
    pub count: usize,
    /// Avalanches per unit time.
    pub rate: f64,
}

/// Incremental avalanche counter fed with the breakpoints of `A(t)`.
#[derive(Debug, Clone)]
pub struct AvalancheCounter {
    t0: f64,
    window: Option<f64>,
    positive: bool,
    /// Start of the current excursion, if it was preceded by zero activity.
    start: Option<f64>,
    count: usize,
}

impl AvalancheCounter {
    /// Counter for a path that starts at time `t0` with activity `a0`.
    pub fn new(t0: f64, a0: f64, window: Option<f64>) -> Self {
        AvalancheCounter { t0, window, positive: a0 > 0.0, start: None, count: 0 }
    }

    /// The activity becomes `a` at time `t`.
    pub fn update(&mut self, t: f64, a: f64) {
        let positive = a > 0.0;
        if positive && !self.positive {
            self.start = Some(t);
        } else if !positive && self.positive {
            if let Some(s) = self.start.take() {
                if self.window.is_none_or(|w| t - s <= w) {
                    self.count += 1;
                }
            }
        }
        self.positive = positive;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Closes the record at `horizon`.
    pub fn finish(self, horizon: f64) -> AvalancheCount {
        let span = horizon - self.t0;
        AvalancheCount { count: self.count, rate: if span > 0.0 { self.count as f64 / span } else { 0.0 } }
    }
}

/// Counts avalanches in the path taking value `values[i]` on
/// `[times[i], times[i+1])` (the last value up to `horizon`).
pub fn count_avalanches(
    times: &[f64],
    values: &[f64],
    horizon: f64,
    window: Option<f64>,
) -> Result<AvalancheCount, MonteCarloError> {
    if times.is_empty() || times.len() != values.len() {
        return Err(MonteCarloError::InvalidArgument("times and values must be nonempty and of equal length".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || horizon < times[times.len() - 1] {
        return Err(MonteCarloError::InvalidArgument("times must be sorted and end before the horizon".into()));
    }
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(MonteCarloError::InvalidArgument("activity must be finite and nonnegative".into()));
    }
    let mut c = AvalancheCounter::new(times[0], values[0], window);
    for (t, a) in times.iter().zip(values).skip(1) {
        c.update(*t, *a);
    }
    Ok(c.finish(horizon))
}

/// Avalanche statistics over an exact-sampling ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct AvalancheStatistics {
    pub counts: Vec<usize>,
    pub mean_rate: f64,
    pub std_error: f64,
}

/// Samples `trajectories` exact paths on `[0, horizon]` and counts the
/// avalanches of `activity(x(t))` in each.
pub fn avalanche_rate<A>(
    net: &ReactionNetwork,
    activity: A,
    horizon: f64,
    trajectories: usize,
    seed: u64,
    window: Option<f64>,
    threads: Option<usize>,
) -> Result<AvalancheStatistics, MonteCarloError>
where
    A: Fn(&[i64]) -> f64 + Sync,
{
    check_horizon(horizon)?;
    if trajectories == 0 {
        return Err(MonteCarloError::InvalidArgument("an ensemble needs at least one trajectory".into()));
    }
    let a0 = activity(&net.x0());
    let counts: Vec<usize> = with_threads(threads, || {
        (0..trajectories as u64)
            .into_par_iter()
            .map(|l| {
                let mut rng = trajectory_rng(seed, l);
                let mut c = AvalancheCounter::new(0.0, a0, window);
                run_ssa(net, horizon, None, &mut rng, |t, _, x| c.update(t, activity(x)))?;
                Ok(c.count())
            })
            .collect::<Result<Vec<_>, MonteCarloError>>()
    })??;
    let rates: Vec<f64> = counts.iter().map(|c| *c as f64 / horizon).collect();
    let l = rates.len() as f64;
    let mean_rate = rates.iter().sum::<f64>() / l;
    let var = if rates.len() > 1 { rates.iter().map(|r| (r - mean_rate).powi(2)).sum::<f64>() / (l - 1.0) } else { 0.0 };
    Ok(AvalancheStatistics { counts, mean_rate, std_error: (var / l).sqrt() })
}

//! Time series of energy, entropy, free energy and of the entropy
//! production, heat dissipation and motive-force rates along a solution of
//! the master equation.

use mrn_network::ReactionNetwork;
use mrn_statespace::{
    build_generator, enumerate_state_space, propagate_ksa_grid, stationary_distribution, KsaOptions, SpaceOptions,
    StateSpace, Truncation,
};

use crate::graph::{EdgeFlux, ThermoGraph, ThermoOptions};
use crate::ThermoError;

/// Rates `σ`, `h`, `f` evaluated at one distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoRates {
    /// Entropy production rate `σ = Σ ρ A`.
    pub sigma: f64,
    /// Heat dissipation rate `h = Σ ρ ln(π_fwd/π_bwd)`.
    pub h: f64,
    /// Motive-force rate `f = Σ ρ Ā` with stationary affinities `Ā`.
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoReport {
    pub omega: f64,
    pub times: Vec<f64>,
    /// Mean energy `U = Σ E p`.
    pub energy: Vec<f64>,
    /// Entropy `S = −Σ p ln p` (0·ln 0 = 0).
    pub entropy: Vec<f64>,
    /// Helmholtz free energy `F = U − S/Ω`.
    pub free_energy: Vec<f64>,
    pub sigma: Vec<f64>,
    pub h: Vec<f64>,
    pub f: Vec<f64>,
    /// State energies `E(x) = −Ω⁻¹ ln p̄(x)`.
    pub state_energy: Vec<f64>,
    /// Stationary affinities `Ā` of every graph edge.
    pub stationary_affinity: Vec<f64>,
    /// Rates evaluated at `p̄` itself.
    pub stationary: ThermoRates,
    /// Whether some nonzero flux crossed a one-sided edge, so that the value
    /// of ε enters `σ`, `h` and the affinities.
    pub epsilon_sensitive: bool,
    /// Largest central-difference residual of `dS/dt = σ − h`.
    pub entropy_balance_residual: f64,
    /// Largest central-difference residual of `dF/dt = (f − σ)/Ω`.
    pub free_energy_balance_residual: f64,
}

impl ThermoReport {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Values at the last grid point: `(σ, h, f)`.
    pub fn last_rates(&self) -> Option<ThermoRates> {
        let n = self.len().checked_sub(1)?;
        Some(ThermoRates { sigma: self.sigma[n], h: self.h[n], f: self.f[n] })
    }
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// `σ`, `h` and `f` under `p` given precomputed fluxes and stationary affinities.
fn rates_from(graph: &ThermoGraph, fluxes: &[EdgeFlux], stationary_affinity: &[f64]) -> ThermoRates {
    let mut r = ThermoRates { sigma: 0.0, h: 0.0, f: 0.0 };
    for ((e, fl), a_bar) in graph.edges().iter().zip(fluxes).zip(stationary_affinity) {
        if fl.rho == 0.0 {
            continue;
        }
        r.sigma += fl.rho * fl.affinity;
        r.h += fl.rho * graph.edge_log_ratio(e);
        r.f += fl.rho * a_bar;
    }
    r
}

/// Thermodynamic rates at a single distribution `p`.
pub fn thermo_rates(graph: &ThermoGraph, p: &[f64], p_bar: &[f64]) -> Result<ThermoRates, ThermoError> {
    let p = graph.normalized(p)?;
    let p_bar = graph.normalized(p_bar)?;
    let a_bar: Vec<f64> = graph.fluxes(&p_bar).iter().map(|f| f.affinity).collect();
    Ok(rates_from(graph, &graph.fluxes(&p), &a_bar))
}

/// Largest residual between a central-difference derivative of `y` and `rhs`
/// over the interior grid points.
fn balance_residual(t: &[f64], y: &[f64], rhs: &[f64]) -> f64 {
    (1..t.len().saturating_sub(1))
        .map(|i| {
            let d = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
            (d - rhs[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// Thermodynamic time series over the distributions `series[i]` at `times[i]`.
pub fn thermo_timeseries(
    graph: &ThermoGraph,
    times: &[f64],
    series: &[Vec<f64>],
    p_bar: &[f64],
) -> Result<ThermoReport, ThermoError> {
    if times.len() != series.len() {
        return Err(ThermoError::InvalidArgument(format!(
            "{} grid times for {} distributions",
            times.len(),
            series.len()
        )));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ThermoError::InvalidArgument("grid times must be strictly increasing".into()));
    }
    let p_bar = &graph.normalized(p_bar)?;
    let omega = graph.opts.omega;
    let state_energy: Vec<f64> = p_bar.iter().map(|p| -p.ln() / omega).collect();
    let stationary_fluxes = graph.fluxes(p_bar);
    let stationary_affinity: Vec<f64> = stationary_fluxes.iter().map(|f| f.affinity).collect();
    let stationary = rates_from(graph, &stationary_fluxes, &stationary_affinity);
    let mut epsilon_sensitive = graph.epsilon_sensitive(p_bar);

    let n = times.len();
    let mut report = ThermoReport {
        omega,
        times: times.to_vec(),
        energy: Vec::with_capacity(n),
        entropy: Vec::with_capacity(n),
        free_energy: Vec::with_capacity(n),
        sigma: Vec::with_capacity(n),
        h: Vec::with_capacity(n),
        f: Vec::with_capacity(n),
        state_energy,
        stationary_affinity,
        stationary,
        epsilon_sensitive: false,
        entropy_balance_residual: 0.0,
        free_energy_balance_residual: 0.0,
    };
    for p in series {
        let p = &graph.normalized(p)?;
        // states outside the support of p̄ carry infinite energy; they
        // contribute only when p is positive there
        let u: f64 = p
            .iter()
            .zip(&report.state_energy)
            .filter(|(pi, _)| **pi > 0.0)
            .map(|(pi, e)| pi * e)
            .sum();
        let s = -p.iter().map(|v| plogp(*v)).sum::<f64>();
        report.energy.push(u);
        report.entropy.push(s);
        report.free_energy.push(u - s / omega);
        let r = rates_from(graph, &graph.fluxes(p), &report.stationary_affinity);
        report.sigma.push(r.sigma);
        report.h.push(r.h);
        report.f.push(r.f);
        epsilon_sensitive |= graph.epsilon_sensitive(p);
    }
    if epsilon_sensitive {
        log::warn!("zero propensities in logarithms were floored at ε = {:e}; σ and h depend on ε", graph.opts.epsilon);
    }
    report.epsilon_sensitive = epsilon_sensitive;
    let ds: Vec<f64> = report.sigma.iter().zip(&report.h).map(|(s, h)| s - h).collect();
    let df: Vec<f64> = report.f.iter().zip(&report.sigma).map(|(f, s)| (f - s) / omega).collect();
    report.entropy_balance_residual = balance_residual(times, &report.entropy, &ds);
    report.free_energy_balance_residual = balance_residual(times, &report.free_energy, &df);
    Ok(report)
}

/// Everything produced by [`thermo_run`].
#[derive(Debug, Clone)]
pub struct ThermoRun {
    pub space: StateSpace,
    pub graph: ThermoGraph,
    pub stationary: Vec<f64>,
    pub report: ThermoReport,
}

/// Enumerates the population space of `net`, computes the stationary
/// distribution, propagates the initial state over `times` and reports the
/// thermodynamic time series.
pub fn thermo_run(
    net: &ReactionNetwork,
    times: &[f64],
    opts: &ThermoOptions,
    ksa: &KsaOptions,
) -> Result<ThermoRun, ThermoError> {
    let space = enumerate_state_space(net, &SpaceOptions::population())?;
    let gen = build_generator(net, &space, Truncation::Absorbing)?;
    if gen.total_outflow_rate() > 0.0 {
        return Err(ThermoError::InvalidArgument(
            "the state space is not closed under the dynamics; thermodynamics needs a conservative generator".into(),
        ));
    }
    let stationary = stationary_distribution(&gen)?;
    let start = space
        .index_of(&net.x0())
        .ok_or_else(|| ThermoError::InvalidArgument("initial state is outside the state space".into()))?;
    let mut p0 = vec![0.0; space.len()];
    p0[start] = 1.0;
    let grid = propagate_ksa_grid(&gen, &p0, times, ksa)?;
    // the generator is conservative: mass drift is solver error
    let series: Vec<Vec<f64>> = grid
        .into_iter()
        .map(|g| {
            let s: f64 = g.p.iter().sum();
            g.p.iter().map(|v| v / s).collect()
        })
        .collect();
    let graph = ThermoGraph::new(net, &space, opts)?;
    let report = thermo_timeseries(&graph, times, &series, &stationary)?;
    Ok(ThermoRun { space, graph, stationary, report })
}

use std::time::Instant;

use mrn_montecarlo::{estimate_statistics, simulate_ensemble, EnsembleOptions, LeapOptions, Method, TrajectoryEnsemble};
use mrn_multiscale::{make_closure, reduce_network, simulate_reduced_ensemble, ClosureKind, MultiscalePartition};
use serde_json::{json, Value};

use super::{finish, moment_table, reaction_index};
use crate::cli::{FastClosureArg, MultiscaleArgs, SimMethod, SimulateArgs, TauMode};
use crate::output::write_jsonl;
use crate::{resolve_model, summary, thread_limit, time_grid, CliError, Report};

fn method_of(a: &SimulateArgs, n_reactions: usize) -> Result<Method, CliError> {
    let leap = matches!(a.method, SimMethod::Poisson | SimMethod::Langevin);
    if !leap && a.tau.is_some() {
        return Err(CliError::config("--tau only applies to the poisson and langevin methods"));
    }
    if a.method != SimMethod::Weighted && !a.lambda.is_empty() {
        return Err(CliError::config("--lambda only applies to the weighted method"));
    }
    if a.method == SimMethod::Langevin && a.tau_mode == TauMode::Bounded {
        return Err(CliError::config("the langevin method uses a fixed step"));
    }
    let tau = || a.tau.ok_or_else(|| CliError::config("--tau is required for leaping methods"));
    Ok(match a.method {
        SimMethod::Ssa => Method::Ssa,
        SimMethod::Weighted => {
            if a.lambda.len() != n_reactions {
                return Err(CliError::config(format!(
                    "--lambda needs one scaling per reaction ({n_reactions}), got {}",
                    a.lambda.len()
                )));
            }
            Method::Weighted(a.lambda.clone())
        }
        SimMethod::Poisson => Method::Poisson(match a.tau_mode {
            TauMode::Fixed => LeapOptions::fixed(tau()?),
            TauMode::Bounded => LeapOptions::bounded(tau()?),
        }),
        SimMethod::Langevin => Method::Langevin { tau: tau()? },
    })
}

fn method_name(m: SimMethod) -> &'static str {
    match m {
        SimMethod::Ssa => "ssa",
        SimMethod::Poisson => "poisson",
        SimMethod::Langevin => "langevin",
        SimMethod::Weighted => "weighted",
    }
}

fn trajectory_lines(ens: &TrajectoryEnsemble) -> impl Iterator<Item = Value> + '_ {
    ens.samples.iter().enumerate().map(move |(l, s)| {
        let states: Vec<&[f64]> = s.chunks(ens.n_species.max(1)).collect();
        json!({ "trajectory": l, "weight": ens.weights[l], "states": states })
    })
}

pub(super) fn simulate(a: &SimulateArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    if a.trajectories == 0 {
        return Err(CliError::config("--trajectories must be at least 1"));
    }
    let grid = time_grid(a.grid.t_end, a.grid.dt)?;
    let method = method_of(a, model.net.n_reactions())?;
    let opts = EnsembleOptions {
        method,
        trajectories: a.trajectories,
        seed: a.model.seed,
        threads: thread_limit(a.threads)?,
    };
    let ens = simulate_ensemble(&model.net, &grid, &opts)?;
    let stats = estimate_statistics(&ens, &grid)?;
    let table = moment_table(&model.net, &grid, &stats.means, |i, n| stats.variance(i, n).max(0.0).sqrt());
    if let Some(path) = &a.samples {
        write_jsonl(path, trajectory_lines(&ens))?;
    }
    let mut s = summary("simulate", Some(&model), Some(a.model.seed), started);
    s.insert("method".into(), json!(method_name(a.method)));
    s.insert("trajectories".into(), json!(a.trajectories));
    s.insert("jumps".into(), json!(ens.jumps));
    s.insert("absorbed".into(), json!(ens.absorbed));
    s.insert("final_mean".into(), json!(stats.means.last()));
    if ens.is_weighted() {
        let w: f64 = ens.weights.iter().sum::<f64>() / ens.len() as f64;
        s.insert("mean_weight".into(), json!(w));
    }
    finish(&a.model, &table, s)
}

pub(super) fn multiscale(a: &MultiscaleArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    if a.trajectories == 0 {
        return Err(CliError::config("--trajectories must be at least 1"));
    }
    let grid = time_grid(a.grid.t_end, a.grid.dt)?;
    let fast = a.fast.iter().map(|f| reaction_index(&model.net, f.trim())).collect::<Result<Vec<_>, _>>()?;
    let part = MultiscalePartition::new(&model.net, &fast)?;
    let kind = match a.closure {
        FastClosureArg::Dimer => ClosureKind::Dimer,
        FastClosureArg::Stationary => ClosureKind::Stationary,
        FastClosureArg::SsaNested => ClosureKind::NestedSsa,
    };
    let closure = if part.is_trivial() { None } else { Some(make_closure(kind, &model.net, &part, a.model.seed)?) };
    let red = reduce_network(&model.net, &part, closure)?;
    let ens = simulate_reduced_ensemble(&red, &grid, a.trajectories, a.model.seed, thread_limit(a.threads)?)?;
    let stats = estimate_statistics(&ens, &grid)?;
    let table = moment_table(&model.net, &grid, &stats.means, |i, n| stats.variance(i, n).max(0.0).sqrt());
    let mut s = summary("multiscale", Some(&model), Some(a.model.seed), started);
    s.insert("closure".into(), json!(red.closure_name()));
    s.insert("fast_reactions".into(), json!(part.fast()));
    s.insert("slow_reactions".into(), json!(part.slow()));
    s.insert("second_order_reactions".into(), json!(red.nonlinear_reactions()));
    s.insert("trajectories".into(), json!(a.trajectories));
    s.insert("slow_events".into(), json!(ens.jumps));
    s.insert("final_mean".into(), json!(stats.means.last()));
    finish(&a.model, &table, s)
}

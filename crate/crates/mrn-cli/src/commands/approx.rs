use std::time::Instant;

use mrn_lna::{check_lna_validity, integrate_lna_covariance, LnaOptions};
use mrn_maxent::{fit_maxent_distribution, interior_modes, moments_from_pmf, FitOptions, Support};
use mrn_moments::ode::OdeOptions;
use mrn_moments::{integrate_moments, ClosureKind, MomentOptions};
use mrn_montecarlo::{simulate_ensemble, EnsembleOptions, Method};
use mrn_statespace::{
    build_generator, enumerate_state_space, propagate_ksa, stationary_distribution, KsaOptions, SpaceOptions,
    Truncation,
};
use serde_json::json;

use super::{delta, finish, initial_index, moment_table, species_index};
use crate::cli::{LnaArgs, MaxentArgs, MomentClosureArg, MomentSource, MomentsArgs, OnOff};
use crate::{resolve_model, summary, thread_limit, time_grid, CliError, ModelRef, Report, Table};

pub(super) fn moments(a: &MomentsArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    let grid = time_grid(a.grid.t_end, a.grid.dt)?;
    let opts = MomentOptions {
        closure: match a.closure {
            MomentClosureArg::Normal => ClosureKind::Normal,
            MomentClosureArg::Lognormal => ClosureKind::Lognormal,
        },
        jensen: a.jensen == OnOff::On,
        ode: OdeOptions { rtol: a.rtol, ..OdeOptions::default() },
        ..MomentOptions::default()
    };
    let sol = integrate_moments(&model.net, &grid, &opts)?;
    let table = moment_table(&model.net, &grid, &sol.mean_x, |i, n| sol.std_x(i, n));
    let d = sol.diagnostics;
    let mut s = summary("moments", Some(&model), None, started);
    s.insert("closure".into(), json!(opts.closure.name()));
    s.insert("jensen".into(), json!(opts.jensen));
    s.insert("final_mean".into(), json!(sol.mean_x.last()));
    s.insert(
        "diagnostics".into(),
        json!({
            "negative_means": d.negative_means,
            "psd_projections": d.psd_projections,
            "closure_fallbacks": d.closure_fallbacks,
            "clamped_evaluations": d.clamped_evaluations,
        }),
    );
    finish(&a.model, &table, s)
}

pub(super) fn lna(a: &LnaArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    let grid = time_grid(a.grid.t_end, a.grid.dt)?;
    let sol = integrate_lna_covariance(&model.net, a.omega, &grid, &LnaOptions::default())?;
    let v = check_lna_validity(&model.net, &sol);
    let table = moment_table(&model.net, &grid, &sol.mean_x, |i, n| sol.std_x(i, n));
    let mut s = summary("lna", Some(&model), None, started);
    s.insert("omega".into(), json!(a.omega));
    s.insert("stable".into(), json!(v.stable()));
    s.insert("max_re_eigenvalue".into(), json!(v.max_re()));
    s.insert("negative_mass_flag".into(), json!(v.negative_mass_flag()));
    s.insert("lower_tail_mass".into(), json!(v.lower_tail_mass));
    s.insert("valid".into(), json!(v.is_valid()));
    finish(&a.model, &table, s)
}

/// Marginal pmf of `species` on its declared range from the chosen source.
fn source_marginal(a: &MaxentArgs, model: &ModelRef, species: usize) -> Result<(Vec<f64>, i64), CliError> {
    let sp = &model.net.species()[species];
    let (lo, hi) = (sp.min, sp.max);
    let mut pmf = vec![0.0; (hi - lo + 1) as usize];
    let t_end = || a.t_end.ok_or_else(|| CliError::config("--t-end is required for the ksa and ssa sources"));
    match a.source {
        MomentSource::Ksa | MomentSource::Stationary => {
            let space = enumerate_state_space(&model.net, &SpaceOptions::population())?;
            let gen = build_generator(&model.net, &space, Truncation::Absorbing)?;
            let p = if a.source == MomentSource::Stationary {
                stationary_distribution(&gen)?
            } else {
                let p0 = delta(space.len(), initial_index(model, &space)?);
                propagate_ksa(&gen, &p0, t_end()?, &KsaOptions::default())?.p
            };
            for (x, w) in space.states().iter().zip(&p) {
                pmf[(x[species] - lo) as usize] += w;
            }
        }
        MomentSource::Ssa => {
            if a.trajectories == 0 {
                return Err(CliError::config("--trajectories must be at least 1"));
            }
            let t = t_end()?;
            let opts = EnsembleOptions {
                threads: thread_limit(a.threads)?,
                ..EnsembleOptions::new(Method::Ssa, a.trajectories, a.model.seed)
            };
            let ens = simulate_ensemble(&model.net, &[0.0, t], &opts)?;
            let w = 1.0 / ens.len() as f64;
            for l in 0..ens.len() {
                let x = ens.state(l, 1)[species].round() as i64;
                pmf[(x - lo) as usize] += w;
            }
        }
    }
    let z: f64 = pmf.iter().sum();
    pmf.iter_mut().for_each(|v| *v /= z);
    Ok((pmf, lo))
}

pub(super) fn maxent(a: &MaxentArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    if a.order == 0 {
        return Err(CliError::config("--order must be at least 1"));
    }
    let species = species_index(&model.net, &a.species)?;
    let (pmf, lo) = source_marginal(a, &model, species)?;
    let hi = lo + pmf.len() as i64 - 1;
    let moments = moments_from_pmf(&pmf, lo, a.order);
    let fit = fit_maxent_distribution(&moments, Support::new(lo, hi)?, &FitOptions::default())?;
    let tv = 0.5 * fit.pmf.iter().zip(&pmf).map(|(x, y)| (x - y).abs()).sum::<f64>();
    let mut table = Table::new(["x", "p_fit", "p_source"]);
    for (k, (f, p)) in fit.pmf.iter().zip(&pmf).enumerate() {
        table.push_floats([(lo + k as i64) as f64, *f, *p]);
    }
    let mut s = summary("maxent", Some(&model), Some(a.model.seed), started);
    s.insert("species".into(), json!(model.net.species()[species].name));
    s.insert("order".into(), json!(a.order));
    s.insert(
        "source".into(),
        json!(match a.source {
            MomentSource::Ksa => "ksa",
            MomentSource::Stationary => "stationary",
            MomentSource::Ssa => "ssa",
        }),
    );
    s.insert("moments".into(), json!(moments));
    s.insert("lambda".into(), json!(fit.lambda));
    s.insert("tv_to_source".into(), json!(tv));
    s.insert("fit_modes".into(), json!(fit.interior_modes()));
    s.insert("source_modes".into(), json!(interior_modes(&pmf, lo)));
    s.insert("entropy".into(), json!(fit.entropy()));
    s.insert("iterations".into(), json!(fit.iterations));
    s.insert("condition".into(), json!(fit.condition));
    s.insert("moment_error".into(), json!(fit.moment_error()));
    finish(&a.model, &table, s)
}

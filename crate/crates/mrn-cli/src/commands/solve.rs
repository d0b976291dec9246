use std::time::Instant;

use mrn_statespace::{
    build_generator, classify_communicating_structure, enumerate_state_space, marginalize_da_distribution,
    propagate_ie, propagate_ksa, stationary_distribution, KsaOptions, SpaceOptions, StateSpace, Truncation,
};
use mrn_thermo::state_energy_landscape;
use serde_json::json;

use super::{delta, finish, initial_index, state_table};
use crate::cli::{ClassifyArgs, LandscapeArgs, SolveIeArgs, SolveKsaArgs};
use crate::{resolve_model, summary, CliError, ModelRef, Report};

fn population_space(model: &ModelRef, max_states: usize) -> Result<StateSpace, CliError> {
    Ok(enumerate_state_space(&model.net, &SpaceOptions { max_states, ..SpaceOptions::population() })?)
}

fn mean_of(space: &StateSpace, p: &[f64], n_species: usize) -> Vec<f64> {
    let mut m = vec![0.0; n_species];
    for (x, w) in space.states().iter().zip(p) {
        m.iter_mut().zip(x).for_each(|(a, v)| *a += *v as f64 * w);
    }
    m
}

fn argmax(p: &[f64]) -> usize {
    (0..p.len()).fold(0, |b, i| if p[i] > p[b] { i } else { b })
}

pub(super) fn solve_ksa(a: &SolveKsaArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    if !(a.t_end.is_finite() && a.t_end >= 0.0) {
        return Err(CliError::config(format!("--t-end must be finite and nonnegative, got {}", a.t_end)));
    }
    let model = resolve_model(&a.model.model)?;
    let space = population_space(&model, a.max_states)?;
    let gen = build_generator(&model.net, &space, Truncation::Absorbing)?;
    let p0 = delta(space.len(), initial_index(&model, &space)?);
    let opts = KsaOptions { krylov_dim: a.krylov_dim, tol: a.tol, ..KsaOptions::default() };
    let out = propagate_ksa(&gen, &p0, a.t_end, &opts)?;
    let table = state_table(&model.net, &space, &[("p", &out.p)]);
    let mut s = summary("solve-ksa", Some(&model), None, started);
    s.insert("states".into(), json!(space.len()));
    s.insert("t_end".into(), json!(a.t_end));
    s.insert("mass".into(), json!(out.p.iter().sum::<f64>()));
    s.insert("lost_mass".into(), json!(out.lost_mass));
    s.insert("clipped_mass".into(), json!(out.clipped_mass));
    s.insert("krylov_steps".into(), json!(out.steps));
    s.insert("argmax".into(), json!(space.state(argmax(&out.p))));
    s.insert("mean".into(), json!(mean_of(&space, &out.p, model.net.n_species())));
    finish(&a.model, &table, s)
}

pub(super) fn solve_ie(a: &SolveIeArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    let da = enumerate_state_space(&model.net, &SpaceOptions { max_states: a.max_states, ..SpaceOptions::da(a.horizon) })?;
    let q_gen = build_generator(&model.net, &da, Truncation::Absorbing)?;
    let zero = vec![0; model.net.n_reactions()];
    let q0 = delta(da.len(), da.index_of(&zero).ok_or_else(|| CliError::config("empty DA space"))?);
    let out = propagate_ie(&q_gen, &q0, a.t_end, a.tau)?;
    let pop = population_space(&model, a.max_states)?;
    let (p, missing) = marginalize_da_distribution(&da, &out.p, &pop)?;
    let table = state_table(&model.net, &pop, &[("p", &p)]);
    let mut s = summary("solve-ie", Some(&model), None, started);
    s.insert("da_states".into(), json!(da.len()));
    s.insert("states".into(), json!(pop.len()));
    s.insert("t_end".into(), json!(a.t_end));
    s.insert("horizon".into(), json!(a.horizon));
    s.insert("ie_steps".into(), json!(out.steps));
    s.insert("lost_mass".into(), json!(1.0 - out.p.iter().sum::<f64>()));
    s.insert("unmapped_mass".into(), json!(missing));
    s.insert("mean".into(), json!(mean_of(&pop, &p, model.net.n_species())));
    finish(&a.model, &table, s)
}

pub(super) fn classify(a: &ClassifyArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    let space = population_space(&model, SpaceOptions::default().max_states)?;
    let gen = build_generator(&model.net, &space, Truncation::Absorbing)?;
    let c = classify_communicating_structure(&gen)?;
    let mut class = vec![-1.0; space.len()];
    for (k, members) in c.persistent.iter().enumerate() {
        for &i in members {
            class[i] = k as f64;
        }
    }
    // persistent class index, or -1 for transient states
    let table = state_table(&model.net, &space, &[("class", &class)]);
    let start = initial_index(&model, &space)?;
    let mut s = summary("classify", Some(&model), None, started);
    s.insert("states".into(), json!(space.len()));
    s.insert("transient".into(), json!(c.transient.len()));
    s.insert("persistent_class_sizes".into(), json!(c.persistent.iter().map(Vec::len).collect::<Vec<_>>()));
    if let Ok(row) = c.transient.binary_search(&start) {
        s.insert("absorption_from_initial".into(), json!(c.absorption[row]));
    }
    s.insert("outflow_rate".into(), json!(gen.total_outflow_rate()));
    finish(&a.model, &table, s)
}

pub(super) fn landscape(a: &LandscapeArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    let space = population_space(&model, SpaceOptions::default().max_states)?;
    let gen = build_generator(&model.net, &space, Truncation::Absorbing)?;
    if gen.total_outflow_rate() > 0.0 {
        return Err(CliError::config("the state space is not closed; a stationary landscape needs a conservative chain"));
    }
    let p = stationary_distribution(&gen)?;
    let l = state_energy_landscape(&p, a.omega)?;
    let table = state_table(&model.net, &space, &[("p", &p), ("E", &l.energy), ("V", &l.potential)]);
    let mut s = summary("landscape", Some(&model), None, started);
    s.insert("states".into(), json!(space.len()));
    s.insert("omega".into(), json!(a.omega));
    s.insert("ground_state".into(), json!(space.state(l.ground_state)));
    s.insert("partition".into(), json!(l.partition));
    s.insert("max_V".into(), json!(l.potential.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max)));
    finish(&a.model, &table, s)
}

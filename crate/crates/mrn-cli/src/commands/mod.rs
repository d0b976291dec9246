mod approx;
mod model;
mod sample;
mod solve;
mod thermo;

use mrn_network::ReactionNetwork;
use mrn_statespace::StateSpace;
use serde_json::Value;

use crate::cli::{Command, ModelArgs};
use crate::{format_float, CliError, ModelRef, Report, Table};

pub(crate) fn dispatch(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::SolveKsa(a) => solve::solve_ksa(&a),
        Command::SolveIe(a) => solve::solve_ie(&a),
        Command::Classify(a) => solve::classify(&a),
        Command::Landscape(a) => solve::landscape(&a),
        Command::Simulate(a) => sample::simulate(&a),
        Command::Multiscale(a) => sample::multiscale(&a),
        Command::Moments(a) => approx::moments(&a),
        Command::Lna(a) => approx::lna(&a),
        Command::Maxent(a) => approx::maxent(&a),
        Command::Thermo(a) => thermo::thermo(&a),
        Command::Export(a) => model::export(&a),
        Command::Models => model::list(),
    }
}

/// Writes `table` where `args` says and wraps up the report.
fn finish(args: &ModelArgs, table: &Table, summary: serde_json::Map<String, Value>) -> Result<Report, CliError> {
    table.write(args.out.as_deref())?;
    Ok(Report { summary: Value::Object(summary), wrote_stdout: args.out.is_none() })
}

fn species_names(net: &ReactionNetwork) -> Vec<String> {
    net.species().iter().map(|s| s.name.clone()).collect()
}

/// Header `t, mean_<s>…, std_<s>…`.
fn moment_header(net: &ReactionNetwork) -> Vec<String> {
    let names = species_names(net);
    std::iter::once("t".to_string())
        .chain(names.iter().map(|n| format!("mean_{n}")))
        .chain(names.iter().map(|n| format!("std_{n}")))
        .collect()
}

fn moment_table(
    net: &ReactionNetwork,
    times: &[f64],
    means: &[Vec<f64>],
    std: impl Fn(usize, usize) -> f64,
) -> Table {
    let mut t = Table::new(moment_header(net));
    let n = net.n_species();
    for (i, ti) in times.iter().enumerate() {
        t.push_floats(std::iter::once(*ti).chain(means[i].iter().copied()).chain((0..n).map(|k| std(i, k))));
    }
    t
}

/// Table with one row per state: species columns followed by `values`.
fn state_table(net: &ReactionNetwork, space: &StateSpace, columns: &[(&str, &[f64])]) -> Table {
    let mut t = Table::new(species_names(net).into_iter().chain(columns.iter().map(|(c, _)| c.to_string())));
    for (i, x) in space.states().iter().enumerate() {
        t.push(x.iter().map(|v| v.to_string()).chain(columns.iter().map(|(_, v)| format_float(v[i]))).collect());
    }
    t
}

fn initial_index(model: &ModelRef, space: &StateSpace) -> Result<usize, CliError> {
    space
        .index_of(&model.net.x0())
        .ok_or_else(|| CliError::config("initial state lies outside the enumerated state space"))
}

fn delta(n: usize, i: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    p[i] = 1.0;
    p
}

fn species_index(net: &ReactionNetwork, name: &str) -> Result<usize, CliError> {
    net.species()
        .iter()
        .position(|s| s.name == name)
        .or_else(|| name.parse::<usize>().ok().filter(|i| *i < net.n_species()))
        .ok_or_else(|| CliError::config(format!("unknown species `{name}`")))
}

fn reaction_index(net: &ReactionNetwork, name: &str) -> Result<usize, CliError> {
    net.reactions()
        .iter()
        .position(|r| r.name == name)
        .or_else(|| name.parse::<usize>().ok().filter(|i| *i < net.n_reactions()))
        .ok_or_else(|| CliError::config(format!("unknown reaction `{name}`")))
}

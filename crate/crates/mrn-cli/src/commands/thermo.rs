use std::time::Instant;

use mrn_statespace::KsaOptions;
use mrn_thermo::{detailed_balance_check, thermo_run, CycleGraph, ThermoOptions};
use serde_json::json;

use super::finish;
use crate::cli::ThermoArgs;
use crate::{resolve_model, summary, time_grid, CliError, Report, Table};

pub(super) fn thermo(a: &ThermoArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    // the initial point mass has a singular entropy derivative; start the
    // grid one step in
    let grid: Vec<f64> = time_grid(a.grid.t_end, a.grid.dt)?.into_iter().skip(1).collect();
    let opts = ThermoOptions { omega: a.omega, epsilon: a.epsilon, ..ThermoOptions::default() };
    let ksa = KsaOptions { tol: a.tol, ..KsaOptions::default() };
    let run = thermo_run(&model.net, &grid, &opts, &ksa)?;
    let r = &run.report;
    let mut table = Table::new(["t", "U", "S", "F", "sigma", "h", "f"]);
    for i in 0..r.len() {
        table.push_floats([r.times[i], r.energy[i], r.entropy[i], r.free_energy[i], r.sigma[i], r.h[i], r.f[i]]);
    }
    let balance = detailed_balance_check(&run.graph, Some(&run.stationary))?;
    if let Some(path) = &a.cycles {
        let cg = CycleGraph::new(&run.graph);
        let cycles: Vec<_> = cg
            .chords()
            .iter()
            .zip(cg.fundamental_cycles())
            .map(|(k, c)| json!({ "chord": k, "start": run.space.state(c.start), "length": c.steps.len(), "affinity": cg.affinity(c) }))
            .collect();
        let doc = json!({
            "nodes": cg.n_nodes(),
            "edges": cg.edges().len(),
            "components": cg.n_components(),
            "fundamental_cycles": cycles.len(),
            "max_abs_affinity": cg.fundamental_cycles().iter().map(|c| cg.affinity(c).abs()).fold(0.0, f64::max),
            "cycles": cycles,
        });
        std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    }
    let stationary_entropy = -run.stationary.iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum::<f64>();
    let mut s = summary("thermo", Some(&model), None, started);
    s.insert("states".into(), json!(run.space.len()));
    s.insert("omega".into(), json!(a.omega));
    s.insert("epsilon".into(), json!(a.epsilon));
    s.insert("epsilon_sensitive".into(), json!(r.epsilon_sensitive));
    s.insert(
        "stationary".into(),
        json!({
            "sigma": r.stationary.sigma,
            "h": r.stationary.h,
            "f": r.stationary.f,
            "entropy": stationary_entropy,
        }),
    );
    s.insert("entropy_balance_residual".into(), json!(r.entropy_balance_residual));
    s.insert("free_energy_balance_residual".into(), json!(r.free_energy_balance_residual));
    s.insert("detailed_balance".into(), json!(balance.balanced));
    finish(&a.model, &table, s)
}

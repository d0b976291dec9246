use std::time::Instant;

use mrn_models::catalog;
use mrn_network::io::{network_to_string, save_network};
use serde_json::{json, Value};

use crate::cli::ExportArgs;
use crate::{resolve_model, summary, CliError, Report, Table};

pub(super) fn export(a: &ExportArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    let model = resolve_model(&a.model.model)?;
    match &a.model.out {
        Some(path) => save_network(&model.net, path)?,
        None => print!("{}", network_to_string(&model.net)),
    }
    let mut s = summary("export", Some(&model), None, started);
    s.insert("species".into(), json!(model.net.n_species()));
    s.insert("reactions".into(), json!(model.net.n_reactions()));
    Ok(Report { summary: Value::Object(s), wrote_stdout: a.model.out.is_none() })
}

pub(super) fn list() -> Result<Report, CliError> {
    let started = Instant::now();
    let mut t = Table::new(["id", "presets", "description"]);
    for e in catalog() {
        t.push(vec![e.id.to_string(), e.presets.join("|"), e.description.to_string()]);
    }
    t.write(None)?;
    Ok(Report { summary: Value::Object(summary("models", None, None, started)), wrote_stdout: true })
}

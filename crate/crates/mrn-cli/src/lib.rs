//! Command-line front end: resolves models, dispatches to the solver crates
//! and writes CSV/JSONL artifacts plus a one-line JSON summary.
//!
//! Every command is a pure function of its arguments and seed, so repeated
//! runs produce byte-identical data files; only the `timings` field of the
//! summary varies.

pub mod cli;
mod commands;
mod error;
mod output;

use std::path::Path;
use std::time::Instant;

use mrn_models::{builtin_model, catalog, parse_model_ref};
use mrn_network::io::load_network;
use mrn_network::ReactionNetwork;
use serde_json::{json, Map, Value};

pub use cli::{Cli, Command};
pub use error::CliError;
pub use output::{format_float, Table};

/// Result of a successful command.
#[derive(Debug, Clone)]
pub struct Report {
    /// Machine-readable summary (one JSON line).
    pub summary: Value,
    /// Whether data were written to standard output, in which case the
    /// summary belongs on standard error.
    pub wrote_stdout: bool,
}

/// A resolved model reference.
#[derive(Debug, Clone)]
pub struct ModelRef {
    pub net: ReactionNetwork,
    /// Catalog id, or the file path for model files.
    pub id: String,
    pub preset: Option<String>,
}

/// Resolves `id[:preset]` against the catalog, or loads a JSON model file.
pub fn resolve_model(spec: &str) -> Result<ModelRef, CliError> {
    let path = Path::new(spec);
    if path.is_file() || spec.ends_with(".json") {
        let net = load_network(path)?;
        return Ok(ModelRef { net, id: spec.to_string(), preset: None });
    }
    let (id, preset) = parse_model_ref(spec);
    let net = builtin_model(id, preset)?;
    let preset = preset.map(str::to_string).or_else(|| {
        catalog().iter().find(|e| e.id == id).and_then(|e| e.presets.first()).map(|p| p.to_string())
    });
    Ok(ModelRef { net, id: id.to_string(), preset })
}

/// Worker threads: the `--threads` flag capped by `MRN_THREADS`.
pub fn thread_limit(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag == Some(0) {
        return Err(CliError::config("--threads must be at least 1"));
    }
    let env = match std::env::var("MRN_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => return Err(CliError::config(format!("MRN_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => None,
    };
    Ok(match (flag, env) {
        (Some(f), Some(e)) => Some(f.min(e)),
        (f, e) => f.or(e),
    })
}

/// Output grid `0, Δt, …, t_end` (Δt rounded so that it divides `t_end`).
pub fn time_grid(t_end: f64, dt: Option<f64>) -> Result<Vec<f64>, CliError> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(CliError::config(format!("--t-end must be positive, got {t_end}")));
    }
    let dt = dt.unwrap_or(t_end / 100.0);
    if !(dt.is_finite() && dt > 0.0) {
        return Err(CliError::config(format!("--dt must be positive, got {dt}")));
    }
    let n = (t_end / dt).round().max(1.0);
    if n > 1e7 {
        return Err(CliError::config("the output grid has more than 10^7 points"));
    }
    let n = n as usize;
    Ok((0..=n).map(|i| t_end * i as f64 / n as f64).collect())
}

/// Common summary fields of a command run on `model`.
pub(crate) fn summary(command: &str, model: Option<&ModelRef>, seed: Option<u64>, started: Instant) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    if let Some(model) = model {
        m.insert("model".into(), json!(model.id));
        m.insert("preset".into(), json!(model.preset));
        m.insert("time_unit".into(), json!(model.net.time_unit()));
    }
    if let Some(seed) = seed {
        m.insert("seed".into(), json!(seed));
    }
    m.insert("timings".into(), json!({ "total_s": started.elapsed().as_secs_f64() }));
    m
}

/// Runs one parsed command line.
pub fn run(cli: Cli) -> Result<Report, CliError> {
    commands::dispatch(cli.command)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Result<Report, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::config(e.to_string()))?;
    run(cli)
}

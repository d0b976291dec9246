use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::CliError;

/// Shortest round-trip representation, with an exponent outside
/// `[1e-4, 1e15)` so that tiny values stay compact.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// In-memory CSV table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push_floats(&mut self, row: impl IntoIterator<Item = f64>) {
        self.rows.push(row.into_iter().map(format_float).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write_to<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.header)?;
        for r in &self.rows {
            wr.write_record(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Writes to `path`, or to standard output when `None`.
    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => self.write_to(File::create(p).map_err(|e| CliError::config(format!("{}: {e}", p.display())))?),
            None => self.write_to(io::stdout().lock()),
        }
    }
}

/// Writes JSON lines to `path`.
pub(crate) fn write_jsonl(path: &Path, lines: impl IntoIterator<Item = serde_json::Value>) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let mut w = io::BufWriter::new(f);
    for l in lines {
        serde_json::to_writer(&mut w, &l)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

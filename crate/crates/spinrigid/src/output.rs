//! Rendering reports and writing them atomically.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use tempfile::NamedTempFile;

use crate::config::Format;
use crate::error::{CliError, Result};
use crate::report::{Report, Table};

pub fn render(report: &Report, table: &Table, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(table),
        Format::Pretty => Ok(render_pretty(report)),
    }
}

fn render_csv(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Write(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

fn render_pretty(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} (seed {})", report.command, report.config.seed);
    for c in &report.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        let _ = writeln!(
            s,
            "  {mark} {}: computed {} reference {} [{}]",
            c.name, c.computed, c.reference, c.provenance
        );
    }
    let sm = report.summary;
    let _ = writeln!(
        s,
        "{}: {} checks, {} passed, {} failed",
        if report.pass { "PASS" } else { "FAIL" },
        sm.checks,
        sm.passed,
        sm.failed
    );
    s
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io_err = |source| CliError::Io {
        path: path.into(),
        source,
    };
    fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(text.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

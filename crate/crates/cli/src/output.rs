//! Atomic CSV and JSON sidecar writing.

use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use tempfile::NamedTempFile;

use crate::config::{RunConfig, Scenario};
use crate::error::CliError;
use crate::run::{model_notes, RunOutput};

/// CSV body for a run: header row then one line per sweep point.
pub fn render_csv(out: &RunOutput) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    // writing into memory cannot fail
    w.write_record(&out.columns).unwrap();
    for row in &out.rows {
        w.write_record(row.iter().map(|c| c.render())).unwrap();
    }
    w.into_inner().unwrap()
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn metadata(config: &RunConfig, scenario: Scenario, out: &RunOutput) -> Value {
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        "scenario": scenario.name(),
        "config": config,
        "columns": out.columns,
        "summary": out.summary,
        "diagnostics": out.diagnostics,
        "notes": model_notes(),
    })
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let err = |source| CliError::Output {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

/// Writes the CSV and its sidecar; the CSV only appears once complete.
pub fn write_outputs(
    path: &Path,
    config: &RunConfig,
    scenario: Scenario,
    out: &RunOutput,
) -> Result<PathBuf, CliError> {
    let side = sidecar_path(path);
    let meta = serde_json::to_vec_pretty(&metadata(config, scenario, out))
        .expect("metadata is serializable");
    write_atomic(&side, &meta)?;
    write_atomic(path, &render_csv(out))?;
    Ok(side)
}

//! Record emission: format rendering and output-path handling.

use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::experiments::ExperimentRecord;

use super::Format;

/// Environment variable naming the default directory for relative `--out`
/// paths.
pub const OUT_DIR_ENV: &str = "ENSEMBLEQ_OUT_DIR";

/// Prefixes relative paths with `$ENSEMBLEQ_OUT_DIR` when set.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn render(record: &ExperimentRecord, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => record.to_json_string()?,
        Format::Csv => record.to_csv(),
        Format::Text => render_text(record),
    })
}

fn render_text(record: &ExperimentRecord) -> String {
    let mut out = format!("{} (seed {})\n", record.experiment, record.seed);
    for (k, v) in &record.statistics {
        out.push_str(&format!("  {k} = {}\n", text_scalar(v)));
    }
    for (k, v) in &record.verdicts {
        let status = v
            .get("status")
            .and_then(serde_json::Value::as_str)
            .unwrap_or("UNKNOWN");
        let mut extra = String::new();
        if let Some(val) = v.get("value").and_then(serde_json::Value::as_str) {
            extra.push_str(&format!(" value={val}"));
        }
        if let Some(exc) = v.get("exception").and_then(serde_json::Value::as_str) {
            extra.push_str(&format!(" exception={exc}"));
        }
        out.push_str(&format!("  [{k}] {status}{extra}\n"));
    }
    if let Some(ms) = record.wall_time_ms {
        out.push_str(&format!("  wall time: {ms:.3} ms\n"));
    }
    out
}

fn text_scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn emit(record: &ExperimentRecord, format: Format, out: Option<&Path>) -> Result<()> {
    let rendered = render(record, format)?;
    write_rendered(&rendered, out)
}

pub fn write_rendered(rendered: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(resolve_out_path(path), rendered)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(rendered.as_bytes())?;
        }
    }
    Ok(())
}

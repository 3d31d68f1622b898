//! Report values and atomic file output.

use std::path::Path;
use std::str::FromStr;

use anyhow::Context;
use serde_json::Value;

use crate::fmt::g9;

/// A JSON number carrying the fixed 9-significant-digit rendering.
pub fn num(x: f64) -> Value {
    Value::Number(serde_json::Number::from_str(&g9(x)).expect("g9 emits a JSON number literal"))
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

/// Write a file atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)
        .with_context(|| format!("cannot write {}", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("cannot move {} into place", path.display()))?;
    Ok(())
}

/// Write CSV rows (already formatted) atomically under `header`.
pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> anyhow::Result<()> {
    let mut out = String::with_capacity(rows.len() * 32 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Keep question ids usable as file-name stems.
pub fn sanitize_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

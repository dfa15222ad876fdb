//! Artifact writers: CSV with 17 significant digits and pretty JSON.

use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// A float with 17 significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text for a header and rows of floats.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(float).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Pretty JSON with a trailing newline. Keys follow struct field order.
pub fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| format!("could not serialize output: {e}"))
}

/// Writes `body` to `path`, or to stdout when no path is given.
pub fn write(path: Option<&Path>, body: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}

/// Optional `(x, y)` plot data next to the main artifact.
pub fn plot(path: Option<&Path>, points: impl IntoIterator<Item = (f64, f64)>) -> Result<(), String> {
    match path {
        Some(p) => write(Some(p), &csv(&["x", "y"], points.into_iter().map(|(x, y)| vec![x, y]))),
        None => Ok(()),
    }
}

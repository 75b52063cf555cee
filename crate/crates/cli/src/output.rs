//! Table, CSV and JSON rendering.
//!
//! Text and markdown tables round to four decimals; CSV and JSON carry the
//! shortest decimal that round-trips to the same `f64`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use coagkernel::{ConvergenceTrace, QuadratureRule};
use serde::Serialize;

use crate::report::ReportRow;

/// Four decimals, or two significant figures in scientific notation for
/// magnitudes under 1e-4.
pub fn fmt4(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:.1E}")
    } else {
        format!("{v:.4}")
    }
}

fn opt4(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), fmt4)
}

#[derive(Serialize)]
struct NodeRow {
    i: usize,
    x: f64,
    w: f64,
}

fn node_rows(rule: &QuadratureRule) -> impl Iterator<Item = NodeRow> + '_ {
    rule.iter()
        .enumerate()
        .map(|(k, (x, w))| NodeRow { i: k + 1, x, w })
}

pub fn nodes_text(rule: &QuadratureRule) -> String {
    let mut out = format!("{:>4}  {:>12}  {:>10}\n", "i", "x_i", "w_i");
    for row in node_rows(rule) {
        let _ = writeln!(out, "{:>4}  {:>12.4}  {:>10}", row.i, row.x, fmt4(row.w));
    }
    out
}

pub fn nodes_csv(rule: &QuadratureRule) -> Result<String> {
    csv_string(node_rows(rule))
}

pub fn nodes_json(rule: &QuadratureRule) -> Result<String> {
    Ok(serde_json::to_string_pretty(
        &node_rows(rule).collect::<Vec<_>>(),
    )?)
}

#[derive(Serialize)]
struct TraceRow {
    n: usize,
    #[serde(rename = "Q")]
    q: f64,
    epsilon: Option<f64>,
}

/// `n,Q,epsilon`; the last row has an empty epsilon.
pub fn trace_csv(trace: &ConvergenceTrace) -> Result<String> {
    let rows = trace.entries.iter().enumerate().map(|(k, &(n, q))| TraceRow {
        n,
        q,
        epsilon: trace.epsilons.get(k).map(|e| e.1),
    });
    csv_string(rows)
}

pub fn report_markdown(rows: &[ReportRow]) -> String {
    let mut out = String::from(
        "| Type | eps_nn | C | Q | R | II | exact II | p (GL) | p (DC) | q |\n\
         |---|---|---|---|---|---|---|---|---|---|\n",
    );
    for r in rows {
        let interval = r.r.map_or_else(
            || "n/a".to_string(),
            |rem| format!("{} ± {}", fmt4(r.q_value), fmt4(rem)),
        );
        let _ = writeln!(
            out,
            "| {} | {:.4E} | {:.4} | {:.4} | {} | {} | {:.8} | {:.4} | {:.4} | {} |",
            r.kernel_id,
            r.epsilon_nn,
            r.c,
            r.q_value,
            opt4(r.r),
            interval,
            r.exact_ii,
            r.p_gl,
            r.p_dc,
            r.q
        );
    }
    out
}

pub fn report_csv(rows: &[ReportRow]) -> Result<String> {
    csv_string(rows.iter())
}

pub fn report_json(rows: &[ReportRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}

fn csv_string<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

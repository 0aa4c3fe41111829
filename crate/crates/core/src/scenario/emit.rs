use std::fs;
use std::io::{self, Write};
use std::path::Path;

use super::config::Format;
use super::sweep::{Cell, SweepTable};
use super::ScenarioError;

/// 17 significant digits, enough to round-trip any f64.
fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell_text(cell: &Cell, column: &str, row: usize) -> Result<String, ScenarioError> {
    match cell {
        Cell::Num(x) if x.is_finite() => Ok(number(*x)),
        Cell::Num(_) => Err(ScenarioError::NonFinite {
            column: column.to_string(),
            row,
        }),
        Cell::Text(s) => Ok(s.clone()),
    }
}

/// Serializes a table. CSV starts with `#` comment lines and a header row;
/// JSON lines carry one object per row with keys in column order.
pub fn emit(table: &SweepTable, format: Format) -> Result<Vec<u8>, ScenarioError> {
    if table.rows.is_empty() {
        return Err(ScenarioError::EmptySweep);
    }
    match format {
        Format::Csv => emit_csv(table),
        Format::JsonLines => emit_json_lines(table),
    }
}

fn emit_csv(table: &SweepTable) -> Result<Vec<u8>, ScenarioError> {
    let mut out = Vec::new();
    for c in &table.comments {
        out.extend_from_slice(format!("# {c}\n").as_bytes());
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let ser = |e: csv::Error| ScenarioError::Serialize(e.to_string());
    w.write_record(&table.columns).map_err(ser)?;
    for (i, row) in table.rows.iter().enumerate() {
        let fields = row
            .iter()
            .zip(&table.columns)
            .map(|(cell, col)| cell_text(cell, col, i))
            .collect::<Result<Vec<_>, _>>()?;
        w.write_record(&fields).map_err(ser)?;
    }
    w.into_inner().map_err(|e| ScenarioError::Serialize(e.to_string()))
}

fn emit_json_lines(table: &SweepTable) -> Result<Vec<u8>, ScenarioError> {
    let mut out = String::new();
    for (i, row) in table.rows.iter().enumerate() {
        out.push('{');
        for (j, (cell, col)) in row.iter().zip(&table.columns).enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&serde_json::to_string(col).map_err(|e| ScenarioError::Serialize(e.to_string()))?);
            out.push(':');
            match cell {
                Cell::Num(_) => out.push_str(&cell_text(cell, col, i)?),
                Cell::Text(s) => {
                    out.push_str(&serde_json::to_string(s).map_err(|e| ScenarioError::Serialize(e.to_string()))?)
                }
            }
        }
        out.push_str("}\n");
    }
    Ok(out.into_bytes())
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> Result<(), ScenarioError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| ScenarioError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| ScenarioError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

//! Report rendering: JSON for machines, flat CSV tables for plotting.
//!
//! Both encodings round-trip: JSON through the typed structs, CSV through
//! [`Table`]. Floats are printed with the shortest representation that
//! parses back to the same bits.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::config::OutputFormat;

/// A flat table: a header row and string cells. Cells must not contain
/// commas or line breaks, which the writers below enforce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&join_line(&self.columns));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&join_line(row));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty csv document".into()))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let cells: Vec<String> = line.split(',').map(str::to_string).collect();
            if cells.len() != columns.len() {
                return Err(Error::Config(format!(
                    "csv row {} has {} cells, expected {}",
                    n + 1,
                    cells.len(),
                    columns.len()
                )));
            }
            rows.push(cells);
        }
        Ok(Self { columns, rows })
    }
}

fn join_line(cells: &[String]) -> String {
    for cell in cells {
        assert!(
            !cell.contains(',') && !cell.contains('\n'),
            "table cell {cell:?} would break the csv layout"
        );
    }
    cells.join(",")
}

/// Shortest float representation that round-trips.
pub fn fmt_f64(v: f64) -> String {
    let mut s = format!("{v}");
    if s.parse::<f64>() != Ok(v) {
        s = format!("{v:e}");
    }
    s
}

/// A result document the harness can emit as JSON or CSV.
pub trait Report: Serialize {
    fn to_table(&self) -> Table;
}

pub fn render<R: Report>(report: &R, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            text
        }
        OutputFormat::Csv => report.to_table().to_csv(),
    })
}

/// Writes to the file when a path is given, to stdout otherwise.
pub fn write_out(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

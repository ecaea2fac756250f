//! Tabular results with a deterministic CSV form.
//!
//! Numbers are written with 17 significant digits so the text round-trips
//! to the identical f64; infinities use the same "-inf"/"inf" literals the
//! JSON layer accepts.

use std::fmt::Write as _;
use std::path::Path;

/// One table cell: a number or a short label (verdicts).
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl Cell {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Num(_) => None,
            Cell::Text(s) => Some(s),
        }
    }
}

/// A named-column table plus an overall pass flag (not serialized).
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    passed: Option<bool>,
}

/// Formats a number with 17 significant digits, stable across runs.
pub fn format_value(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        return "-inf".to_string();
    }
    if x == f64::INFINITY {
        return "inf".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    format!("{x:.16e}")
}

/// Parses a value written by `format_value`.
pub fn parse_value(s: &str) -> Option<f64> {
    match s {
        "-inf" => Some(f64::NEG_INFINITY),
        "inf" => Some(f64::INFINITY),
        "nan" => Some(f64::NAN),
        _ => s.parse().ok(),
    }
}

impl Report {
    pub fn new(columns: &[&str]) -> Report {
        Report {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            passed: None,
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn set_passed(&mut self, passed: bool) {
        self.passed = Some(passed);
    }

    pub fn passed(&self) -> Option<bool> {
        self.passed
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column; text cells are skipped.
    pub fn column_values(&self, name: &str) -> Vec<f64> {
        let Some(idx) = self.column_index(name) else {
            return Vec::new();
        };
        self.rows.iter().filter_map(|r| r[idx].as_num()).collect()
    }

    /// True when the last `thresholds.len()` values of the column exceed the
    /// thresholds in order. The divergence verdicts use {10, 20, 30}.
    pub fn column_exceeds_tail(&self, name: &str, thresholds: &[f64]) -> bool {
        let vals = self.column_values(name);
        if vals.len() < thresholds.len() {
            return false;
        }
        let tail = &vals[vals.len() - thresholds.len()..];
        tail.iter().zip(thresholds).all(|(&v, &t)| v > t)
    }

    /// True when the column strictly increases over its last three entries and
    /// rises by more than `min_rise` overall: the unbounded-growth flag.
    pub fn column_trending_up(&self, name: &str, min_rise: f64) -> bool {
        let vals = self.column_values(name);
        if vals.len() < 3 {
            return false;
        }
        let tail = &vals[vals.len() - 3..];
        let increasing = tail[0] < tail[1] && tail[1] < tail[2];
        increasing && vals[vals.len() - 1] - vals[0] > min_rise
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                first = false;
                match cell {
                    Cell::Num(x) => {
                        let _ = write!(out, "{}", format_value(*x));
                    }
                    Cell::Text(s) => {
                        debug_assert!(!s.contains(',') && !s.contains('\n'));
                        out.push_str(s);
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Option<Report> {
        let mut lines = text.lines();
        let header = lines.next()?;
        let columns: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let cells: Vec<Cell> = line
                .split(',')
                .map(|field| match parse_value(field) {
                    Some(x) if !field.is_empty() => Cell::Num(x),
                    _ => Cell::Text(field.to_string()),
                })
                .collect();
            if cells.len() != columns.len() {
                return None;
            }
            rows.push(cells);
        }
        Some(Report {
            columns,
            rows,
            passed: None,
        })
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

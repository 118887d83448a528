//! Tables rendered as CSV or JSON with identical values.
//!
//! Floats are written with 17 significant digits in CSV and as shortest
//! round-trip numbers in JSON, so both parse to the same `f64`. Negative
//! infinity (the logarithm of zero) is written as `neg_inf`; NaN and
//! positive infinity are rejected.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const NEG_INF: &str = "neg_inf";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    /// a value outside the representable range, e.g. an underflowed linear
    /// counterpart of a log-domain quantity
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(i64::try_from(x).expect("count fits in i64"))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// The linear value of a base-2 logarithm when it is a normal double,
/// otherwise [`Cell::Empty`].
pub fn linear_cell(log2: f64) -> Cell {
    let x = log2.exp2();
    if log2 == f64::NEG_INFINITY {
        Cell::Float(0.0)
    } else if x.is_normal() {
        Cell::Float(x)
    } else {
        Cell::Empty
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        assert_eq!(row.len(), self.columns.len(), "row width");
        for (c, name) in row.iter().zip(&self.columns) {
            if let Cell::Float(x) = c {
                if x.is_nan() || *x == f64::INFINITY {
                    return Err(Error::NonFinite { column: name.clone(), value: *x });
                }
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// Float values of one column; `neg_inf` maps to negative infinity and
    /// other cells are skipped.
    pub fn float_column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .filter_map(|r| match r[idx] {
                    Cell::Float(x) => Some(x),
                    Cell::Int(i) => Some(i as f64),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| quote(c)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(json_cell)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("tables serialize");
        s.push('\n');
        s
    }
}

pub fn format_float(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        return NEG_INF.to_string();
    }
    let mut s = String::new();
    write!(s, "{x:.16e}").expect("write to string");
    s
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Float(x) => format_float(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => quote(s),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Float(x) if *x == f64::NEG_INFINITY => Value::String(NEG_INF.to_string()),
        Cell::Float(x) => Value::from(*x),
        Cell::Int(i) => Value::from(*i),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Empty => Value::Null,
    }
}

/// Parses one CSV line produced by [`Table::to_csv`].
pub fn split_csv_line(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(ch) = chars.next() {
        match (ch, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}

//! Output documents: a provenance header followed by named tables.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};

/// Version of the JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Empty,
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v) => format_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => Value::String(format_num(*v)),
            Cell::Int(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

/// Shortest representation that round-trips.
pub fn format_num(v: f64) -> String {
    format!("{v}")
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Cell::Empty)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Index of a column by name.
    pub fn col(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub command: String,
    pub inputs: Vec<InputFile>,
    /// Echo of the effective configuration.
    pub config: Value,
    pub tables: Vec<Table>,
}

impl Document {
    pub fn new(command: &str, config: Value) -> Self {
        Document {
            command: command.to_string(),
            inputs: Vec::new(),
            config,
            tables: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| CliError::Input(format!("writing output: {e}"));
        writeln!(out, "# volstat {}", self.command).map_err(io)?;
        for f in &self.inputs {
            writeln!(out, "# input {} sha256={}", f.path, f.sha256).map_err(io)?;
        }
        writeln!(out, "# config {}", self.config).map_err(io)?;
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                writeln!(out).map_err(io)?;
            }
            writeln!(out, "# table {}", t.name).map_err(io)?;
            let mut w = csv::Writer::from_writer(&mut out);
            let csv_err = |e: csv::Error| CliError::Input(format!("writing output: {e}"));
            w.write_record(&t.columns).map_err(csv_err)?;
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::csv_text)).map_err(csv_err)?;
            }
            w.flush().map_err(io)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut tables = Map::new();
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                .collect();
            tables.insert(t.name.clone(), json!({ "columns": t.columns, "rows": rows }));
        }
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "provenance": { "inputs": self.inputs, "config": self.config },
            "tables": tables,
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| CliError::Input(format!("writing output: {e}"));
        serde_json::to_writer_pretty(&mut out, &self.to_json())
            .map_err(|e| CliError::Input(format!("writing output: {e}")))?;
        writeln!(out).map_err(io)
    }
}

//! Column-named tables and their CSV/JSON encodings.
//!
//! Floats are written in shortest round-trip form so that outputs are
//! byte-stable and lose no precision.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_columns(name: &str, columns: Vec<String>) -> Self {
        Self {
            name: name.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn index(&self, column: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == column)
    }

    /// Numeric column by name; non-numeric cells become `None`.
    pub fn column(&self, column: &str) -> Option<Vec<Option<f64>>> {
        let i = self.index(column)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let enc = |e: csv::Error| CliError::Encode(e.to_string());
        w.write_record(&self.columns).map_err(enc)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(enc)?;
        }
        w.into_inner().map_err(|e| CliError::Encode(e.to_string()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = serde_json::json!({
            "name": self.name,
            "columns": self.columns,
            "rows": rows,
        });
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Encode(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn encode(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes each table to `<out>/<name>.<ext>`, or to stdout with a
/// `# <name>` marker line when no directory is given.
pub fn emit(tables: &[Table], out: Option<&Path>, format: Format) -> Result<Vec<PathBuf>> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
            let mut written = Vec::new();
            for t in tables {
                let path = dir.join(format!("{}.{}", t.name, format.extension()));
                write_file(&path, &t.encode(format)?)?;
                written.push(path);
            }
            Ok(written)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for t in tables {
                let io = |source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                };
                writeln!(lock, "# {}", t.name).map_err(io)?;
                lock.write_all(&t.encode(format)?).map_err(io)?;
            }
            Ok(Vec::new())
        }
    }
}

/// Writes a JSON document next to the tables, or to stdout.
pub fn emit_json(name: &str, value: &Value, out: Option<&Path>) -> Result<Option<PathBuf>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Encode(e.to_string()))?;
    bytes.push(b'\n');
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
            let path = dir.join(format!("{name}.json"));
            write_file(&path, &bytes)?;
            Ok(Some(path))
        }
        None => {
            std::io::stdout().write_all(&bytes).map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
            Ok(None)
        }
    }
}

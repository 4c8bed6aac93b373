use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cadlag::CadlagPath;
use crate::cli::config::OutputFormat;
use crate::error::{Error, Result};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Flag(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Writes output files under one directory and records their names.
pub(crate) struct Sink {
    dir: PathBuf,
    format: OutputFormat,
    hash: String,
    seed: u64,
    pub files: Vec<String>,
}

pub(crate) fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

impl Sink {
    pub fn create(dir: PathBuf, format: OutputFormat, hash: String, seed: u64) -> Result<Self> {
        fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
        Ok(Sink {
            dir,
            format,
            hash,
            seed,
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: String, contents: String) -> Result<()> {
        let path = self.dir.join(&name);
        fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
        self.files.push(name);
        Ok(())
    }

    fn json_doc(&self, key: &str, body: Value) -> String {
        let mut doc = Map::new();
        doc.insert("config_hash".into(), json!(self.hash));
        doc.insert("seed".into(), json!(self.seed));
        doc.insert(key.into(), body);
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
        s.push('\n');
        s
    }

    pub fn table(&mut self, stem: &str, table: &Table) -> Result<()> {
        let contents = match self.format {
            OutputFormat::Csv => {
                let mut s = format!("# config_hash={}\n", self.hash);
                s.push_str(&table.columns.join(","));
                s.push('\n');
                for row in &table.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(s, "{}", cells.join(","));
                }
                s
            }
            OutputFormat::Json => {
                let rows: Vec<Value> = table
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            table
                                .columns
                                .iter()
                                .zip(row)
                                .map(|(c, v)| (c.to_string(), v.json()))
                                .collect(),
                        )
                    })
                    .collect();
                self.json_doc("rows", Value::Array(rows))
            }
        };
        self.write(format!("{stem}.{}", self.format.extension()), contents)
    }

    pub fn path(&mut self, stem: &str, path: &CadlagPath) -> Result<()> {
        let contents = match self.format {
            OutputFormat::Csv => format!("# config_hash={}\n{}", self.hash, path.to_csv()),
            OutputFormat::Json => self.json_doc("path", serde_json::to_value(path).expect("path serializes")),
        };
        self.write(format!("{stem}.{}", self.format.extension()), contents)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value).expect("json");
        s.push('\n');
        let path = self.dir.join(name);
        fs::write(&path, s).map_err(|e| io_error(&path, e))
    }
}

//! Result tables: CSV and JSON writers and the matching reader.
//!
//! CSV layout:
//!
//! ```text
//! # schema: telegraph-table/1
//! # formula: symmetric_cos
//! # params_hash: 3f1c...
//! m,t,value
//! 1.0000000000000000e0,1.0000000000000000e0,7.3575888234288467e-1
//! ```
//!
//! Numbers are written with 17 significant digits so they parse back to the
//! identical `f64`.

use std::fmt::Write as _;
use std::io::Read;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SCHEMA: &str = "telegraph-table/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            Cell::Num(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub formula: String,
    pub params_hash: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// First 16 hex digits of the SHA-256 of the canonical JSON of `params`.
pub fn params_hash<T: Serialize>(params: &T) -> String {
    let canonical = serde_json::to_vec(&serde_json::to_value(params).expect("parameters serialize")).expect("json");
    let digest = Sha256::digest(&canonical);
    hex::encode(&digest[..8])
}

fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

impl Table {
    pub fn new<T: Serialize>(formula: &str, params: &T, columns: &[&str]) -> Self {
        Table {
            formula: formula.to_owned(),
            params_hash: params_hash(params),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column; `None` if it is missing or not numeric.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column(name)?;
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# schema: {SCHEMA}").unwrap();
        writeln!(out, "# formula: {}", self.formula).unwrap();
        writeln!(out, "# params_hash: {}", self.params_hash).unwrap();
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => format_number(*v),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            w.write_record(&fields).expect("in-memory write");
        }
        out.push_str(std::str::from_utf8(&w.into_inner().expect("flush")).expect("utf-8"));
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(x) if x.is_finite() => Value::from(*x),
                            Cell::Num(x) => Value::from(x.to_string()),
                            Cell::Text(s) => Value::from(s.clone()),
                        };
                        (k.clone(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({
            "schema": SCHEMA,
            "formula": self.formula,
            "params_hash": self.params_hash,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }

    /// Parses either format; the format is detected from the first
    /// non-blank character.
    pub fn parse(text: &str) -> Result<Table, CliError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_csv(text)
        }
    }

    pub fn read<R: Read>(mut reader: R) -> Result<Table, CliError> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Self::parse(&text)
    }

    fn parse_csv(text: &str) -> Result<Table, CliError> {
        let mut schema = None;
        let mut formula = String::new();
        let mut params_hash = String::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.trim().split_once(':') {
                    let value = value.trim().to_owned();
                    match key.trim() {
                        "schema" => schema = Some(value),
                        "formula" => formula = value,
                        "params_hash" => params_hash = value,
                        _ => {}
                    }
                }
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        check_schema(schema.as_deref())?;
        let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| CliError::Parse(format!("table header: {e}")))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CliError::Parse(format!("table row {}: {e}", i + 1)))?;
            rows.push(
                record
                    .iter()
                    .map(|f| match f.parse::<f64>() {
                        Ok(v) => Cell::Num(v),
                        Err(_) => Cell::Text(f.to_owned()),
                    })
                    .collect(),
            );
        }
        Ok(Table {
            formula,
            params_hash,
            columns,
            rows,
        })
    }

    fn parse_json(text: &str) -> Result<Table, CliError> {
        #[derive(Deserialize)]
        struct Doc {
            schema: String,
            formula: String,
            params_hash: String,
            columns: Vec<String>,
            rows: Vec<Map<String, Value>>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("table json: {e}")))?;
        check_schema(Some(&doc.schema))?;
        let mut rows = Vec::with_capacity(doc.rows.len());
        for (i, obj) in doc.rows.iter().enumerate() {
            let mut row = Vec::with_capacity(doc.columns.len());
            for col in &doc.columns {
                let cell = match obj.get(col) {
                    Some(Value::Number(n)) => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
                    Some(Value::String(s)) => match s.parse::<f64>() {
                        Ok(v) if !v.is_finite() => Cell::Num(v),
                        _ => Cell::Text(s.clone()),
                    },
                    _ => return Err(CliError::Parse(format!("row {} lacks column `{col}`", i + 1))),
                };
                row.push(cell);
            }
            rows.push(row);
        }
        Ok(Table {
            formula: doc.formula,
            params_hash: doc.params_hash,
            columns: doc.columns,
            rows,
        })
    }
}

fn check_schema(schema: Option<&str>) -> Result<(), CliError> {
    match schema {
        Some(SCHEMA) => Ok(()),
        Some(other) => Err(CliError::Parse(format!("unsupported table schema `{other}`"))),
        None => Err(CliError::Parse("missing `# schema:` header".into())),
    }
}

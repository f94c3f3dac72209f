//! Report emission. Every report starts with the resolved config.

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Big(String),
    Real(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Real(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Real)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Cell {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Text(s)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(x: $t) -> Cell {
                Cell::Int(x as i128)
            }
        }
    )*};
}
int_cell!(u64, usize, i64, u32);

impl From<u128> for Cell {
    fn from(x: u128) -> Cell {
        Cell::Big(x.to_string())
    }
}

/// Reals with 17 significant digits, `.` as decimal separator.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Big(s) | Cell::Text(s) => s.clone(),
            Cell::Real(x) => fmt_real(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

/// A command's result: rows for CSV and a document for JSON.
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `# key=value` lines after the config in CSV output.
    pub notes: Vec<(String, String)>,
    pub json: Value,
    pub default_format: Format,
    /// Plain lines replace the CSV table (one Ostrowski word per line).
    pub lines: Option<Vec<String>>,
}

impl Report {
    pub fn table(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>, json: Value) -> Report {
        Report {
            columns,
            rows,
            notes: Vec::new(),
            json,
            default_format: Format::Csv,
            lines: None,
        }
    }

    pub fn json_default(mut self) -> Report {
        self.default_format = Format::Json;
        self
    }

    pub fn note(mut self, key: &str, value: impl ToString) -> Report {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }

    pub fn write(
        &self,
        out: &mut dyn Write,
        config: &BTreeMap<String, String>,
        format: Option<Format>,
    ) -> Result<()> {
        match format.unwrap_or(self.default_format) {
            Format::Json => {
                let mut doc = json!({ "config": config });
                if let (Value::Object(d), Value::Object(body)) = (&mut doc, &self.json) {
                    d.extend(body.clone());
                } else {
                    doc["result"] = self.json.clone();
                }
                let text =
                    serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(out, "{text}")?;
            }
            Format::Csv => {
                for (k, v) in config.iter().chain(self.notes.iter().map(|(k, v)| (k, v))) {
                    writeln!(out, "# {k}={v}")?;
                }
                if let Some(lines) = &self.lines {
                    for l in lines {
                        writeln!(out, "{l}")?;
                    }
                    return Ok(());
                }
                let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
                let csv_err = |e: csv::Error| Error::Io(e.to_string());
                w.write_record(&self.columns).map_err(csv_err)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text))
                        .map_err(csv_err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                out.write_all(&bytes)?;
            }
        }
        Ok(())
    }
}

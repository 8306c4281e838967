//! Rendering of command results as JSON, CSV or aligned text.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Flat rows for CSV and text output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// A single row built from `(column, cell)` pairs.
    pub fn record(cells: Vec<(&str, String)>) -> Self {
        let (header, row): (Vec<_>, Vec<_>) = cells.into_iter().map(|(h, c)| (h.to_string(), c)).unzip();
        Table { header, rows: vec![row] }
    }
}

/// What a command produced. `ok = false` means a check failed; the output is
/// still written before exiting with status 1.
pub struct Output {
    pub command: &'static str,
    pub json: Map<String, Value>,
    pub table: Table,
    /// Replaces the rendered table in text mode.
    pub text: Option<String>,
    pub ok: bool,
}

impl Output {
    pub fn new(command: &'static str, json: Value, table: Table) -> Self {
        let json = match json {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        Output { command, json, table, text: None, ok: true }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut top = Map::new();
                top.insert("schema".into(), Value::from(1));
                top.insert("command".into(), Value::from(self.command));
                for (k, v) in &self.json {
                    top.insert(k.clone(), round_floats(v));
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("plain data");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.header).expect("in-memory write");
                for row in &self.table.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 cells")
            }
            Format::Text => match &self.text {
                Some(t) => t.clone(),
                None => text_table(&self.table),
            },
        }
    }
}

/// One row is printed as `key: value` lines, several as aligned columns.
fn text_table(t: &Table) -> String {
    let mut out = String::new();
    if t.rows.len() == 1 {
        let w = t.header.iter().map(|h| h.len() + 1).max().unwrap_or(0);
        for (h, c) in t.header.iter().zip(&t.rows[0]) {
            out.push_str(&format!("{:<w$}  {c}\n", format!("{h}:")));
        }
        return out;
    }
    let mut widths: Vec<usize> = t.header.iter().map(|h| h.len()).collect();
    for row in &t.rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    out.push_str(&line(&t.header));
    for row in &t.rows {
        out.push_str(&line(row));
    }
    out
}

/// `x` to six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        format!("{:.*}", (5 - exp).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn round_floats(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            sig6(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), round_floats(v))).collect()),
        other => other.clone(),
    }
}

pub fn write(path: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

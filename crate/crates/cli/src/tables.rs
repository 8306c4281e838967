//! The three reference tables of small values, recomputed cell by cell.

use forbcfg::recurrence::h2_table;
use forbcfg::tcm::{h_exact, HExactOptions};
use forbcfg::Result;
use num::bigint::BigInt;
use serde_json::{json, Value};

use crate::output::{sig6, Output, Table};

/// Reference values, as usually printed.
const H_ROW: [&str; 6] = ["0", "1", "4", "12", "30", "73"];
const H_NORM_ROW: [&str; 6] = ["0.000", "0.250", "0.333", "0.375", "0.375", "0.380"];
const PROOF_H_ROW: [&str; 6] = ["0", "0.25", "0.333", "0.375", "0.375", "0.380"];
const PROOF_SUM_ROW: [&str; 6] = ["0.333", "0.417", "0.417", "0.417", "0.396", "0.391"];
const H2_ROW: [&str; 8] = ["0", "1", "4", "12", "30", "73", "172", "400"];
const H2_NORM_ROW: [&str; 8] = ["0.000", "0.250", "0.333", "0.375", "0.375", "0.380", "0.384", "0.391"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    All,
    /// `H(m)` and `h(m)` at `alpha = 2`, `m <= 6`.
    H,
    /// `h(m)` and `h(m) + 2/3 2^-m`, `m <= 6`.
    UpperProof,
    /// `H2(m)` and `h2(m)`, `m <= 8`.
    H2,
}

struct Cell {
    table: &'static str,
    m: usize,
    quantity: &'static str,
    exact: Option<String>,
    float: Option<f64>,
    expected: &'static str,
}

impl Cell {
    fn int(table: &'static str, m: usize, quantity: &'static str, v: impl ToString, expected: &'static str) -> Self {
        Cell { table, m, quantity, exact: Some(v.to_string()), float: None, expected }
    }

    fn real(table: &'static str, m: usize, quantity: &'static str, v: f64, expected: &'static str) -> Self {
        Cell { table, m, quantity, exact: None, float: Some(v), expected }
    }

    /// Integers must agree exactly; decimals after rounding to the printed precision.
    fn matches(&self) -> bool {
        match (&self.exact, self.float) {
            (Some(e), _) => e == self.expected,
            (None, Some(x)) => {
                let places = self.expected.split_once('.').map_or(0, |(_, f)| f.len());
                format!("{x:.places$}") == self.expected
            }
            _ => false,
        }
    }

    fn shown(&self) -> String {
        self.exact.clone().unwrap_or_else(|| sig6(self.float.unwrap_or(f64::NAN)))
    }

    fn json(&self) -> Value {
        let value = match (&self.exact, self.float) {
            (Some(e), _) => Value::String(e.clone()),
            (None, Some(x)) => json!(x),
            _ => Value::Null,
        };
        json!({
            "m": self.m,
            "quantity": self.quantity,
            "value": value,
            "expected": self.expected,
            "match": self.matches(),
        })
    }
}

fn h_values() -> Result<Vec<u64>> {
    (1..=6).map(|m| Ok(h_exact(m, &2u64, &HExactOptions::default())?.value)).collect()
}

pub fn emit(which: Which) -> Result<Output> {
    let mut cells = Vec::new();
    let want = |w: Which| which == Which::All || which == w;
    if want(Which::H) || want(Which::UpperProof) {
        let h = h_values()?;
        let norm = |m: usize| h[m - 1] as f64 / (m as f64 * 2f64.powi(m as i32 - 1));
        if want(Which::H) {
            for m in 1..=6 {
                cells.push(Cell::int("h", m, "H", h[m - 1], H_ROW[m - 1]));
                cells.push(Cell::real("h", m, "h", norm(m), H_NORM_ROW[m - 1]));
            }
        }
        if want(Which::UpperProof) {
            for m in 1..=6 {
                let extra = 2.0 / 3.0 / 2f64.powi(m as i32);
                cells.push(Cell::real("upper-proof", m, "h", norm(m), PROOF_H_ROW[m - 1]));
                cells.push(Cell::real("upper-proof", m, "h+2/3*2^-m", norm(m) + extra, PROOF_SUM_ROW[m - 1]));
            }
        }
    }
    if want(Which::H2) {
        let t = h2_table(8, &BigInt::from(2));
        for m in 1..=8 {
            cells.push(Cell::int("h2", m, "H2", t.value(m), H2_ROW[m - 1]));
            cells.push(Cell::real("h2", m, "h2", t.normalized(m), H2_NORM_ROW[m - 1]));
        }
    }

    let mut table = Table::new(&["table", "m", "quantity", "value", "expected", "match"]);
    for c in &cells {
        table.push(vec![
            c.table.into(),
            c.m.to_string(),
            c.quantity.into(),
            c.shown(),
            c.expected.into(),
            c.matches().to_string(),
        ]);
    }
    let mut tables = serde_json::Map::new();
    for c in &cells {
        tables
            .entry(c.table)
            .or_insert_with(|| Value::Array(Vec::new()))
            .as_array_mut()
            .expect("array")
            .push(c.json());
    }
    let all_match = cells.iter().all(Cell::matches);
    let mut out = Output::new("emit-tables", json!({ "tables": tables, "all_match": all_match }), table);
    out.ok = all_match;
    Ok(out)
}

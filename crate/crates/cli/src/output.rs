//! Deterministic JSON and CSV rendering.
//!
//! Objects are key-sorted and floats carry at most 12 significant digits, so
//! identical inputs give byte-identical output.

use num_complex::Complex64;
use serde_json::{json, Value};

/// Significant digits kept in every printed float.
pub const SIG_DIGITS: usize = 12;

/// `x` rounded to [`SIG_DIGITS`] significant digits; non-finite → `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses");
    // no negative zero in the output
    json!(if r == 0.0 { 0.0 } else { r })
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

/// The same rounding for CSV cells.
pub fn cell(x: f64) -> String {
    match num(x) {
        Value::Null => String::new(),
        v => v.to_string(),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

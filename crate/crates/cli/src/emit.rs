//! Rendering of command results as JSON, CSV or an aligned table.
//!
//! JSON integers are exact JSON numbers, rationals are
//! `{"num": "…", "den": "…"}` with decimal strings, and reals use the
//! shortest representation that round-trips.

use qcoin_core::{BigInt, BigRational, Scalar};
use serde_json::{Map, Number, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Int(BigInt),
    Rational(BigRational),
    Real(f64),
    Bool(bool),
    Text(String),
    List(Vec<Output>),
    Record(Vec<(String, Output)>),
}

impl Output {
    pub fn record<K: Into<String>>(fields: impl IntoIterator<Item = (K, Output)>) -> Self {
        Output::Record(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn int(v: impl Into<BigInt>) -> Self {
        Output::Int(v.into())
    }

    /// Rationals become reals; everything else is unchanged.
    pub fn into_float(self) -> Self {
        match self {
            Output::Rational(r) => Output::Real(Scalar::Exact(r).to_f64()),
            Output::List(items) => Output::List(items.into_iter().map(Output::into_float).collect()),
            Output::Record(fields) => Output::Record(fields.into_iter().map(|(k, v)| (k, v.into_float())).collect()),
            other => other,
        }
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Output::List(_) | Output::Record(_))
    }
}

impl From<Scalar> for Output {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Exact(r) => Output::Rational(r),
            Scalar::Real(x) => Output::Real(x),
        }
    }
}

impl From<BigRational> for Output {
    fn from(r: BigRational) -> Self {
        Output::Rational(r)
    }
}

impl From<f64> for Output {
    fn from(x: f64) -> Self {
        Output::Real(x)
    }
}

pub fn to_json(out: &Output) -> Value {
    match out {
        Output::Int(i) => Value::Number(i.to_string().parse::<Number>().expect("integers are valid JSON numbers")),
        Output::Rational(r) => {
            let mut m = Map::new();
            m.insert("num".into(), Value::String(r.numer().to_string()));
            m.insert("den".into(), Value::String(r.denom().to_string()));
            Value::Object(m)
        }
        Output::Real(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
        Output::Bool(b) => Value::Bool(*b),
        Output::Text(s) => Value::String(s.clone()),
        Output::List(items) => Value::Array(items.iter().map(to_json).collect()),
        Output::Record(fields) => Value::Object(fields.iter().map(|(k, v)| (k.clone(), to_json(v))).collect()),
    }
}

/// Plain text for a scalar cell; nested lists are space-separated.
fn cell(out: &Output) -> String {
    match out {
        Output::Int(i) => i.to_string(),
        Output::Rational(r) => r.to_string(),
        Output::Real(x) => real_text(*x),
        Output::Bool(b) => b.to_string(),
        Output::Text(s) => s.clone(),
        Output::List(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        Output::Record(_) => serde_json::to_string(&to_json(out)).unwrap_or_default(),
    }
}

fn real_text(x: f64) -> String {
    match Number::from_f64(x) {
        Some(n) => n.to_string(),
        None => x.to_string(),
    }
}

/// Rows of cells: lists of records become a header plus one row per record,
/// a single record a header plus one row, anything else one cell per line.
fn rows(out: &Output) -> Vec<Vec<String>> {
    match out {
        Output::List(items) if !items.is_empty() && items.iter().all(|i| matches!(i, Output::Record(_))) => {
            let Output::Record(first) = &items[0] else { unreachable!() };
            let mut rows = vec![first.iter().map(|(k, _)| k.clone()).collect()];
            for item in items {
                if let Output::Record(fields) = item {
                    rows.push(fields.iter().map(|(_, v)| cell(v)).collect());
                }
            }
            rows
        }
        Output::List(items) => items.iter().map(|i| vec![cell(i)]).collect(),
        Output::Record(fields) => vec![
            fields.iter().map(|(k, _)| k.clone()).collect(),
            fields.iter().map(|(_, v)| cell(v)).collect(),
        ],
        scalar => vec![vec![cell(scalar)]],
    }
}

fn csv_text(out: &Output) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for row in rows(out) {
        w.write_record(&row).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("writing to memory cannot fail")).expect("cells are UTF-8")
}

fn table_text(out: &Output) -> String {
    if let Output::Record(fields) = out {
        if fields.iter().all(|(_, v)| v.is_scalar() || matches!(v, Output::List(_))) {
            let width = fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            return fields
                .iter()
                .map(|(k, v)| format!("{k:<width$}  {}\n", cell(v)))
                .collect();
        }
    }
    let rows = rows(out);
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    rows.iter()
        .map(|r| {
            let line: Vec<String> = r.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
            format!("{}\n", line.join("  ").trim_end())
        })
        .collect()
}

pub fn emit(out: &Output, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", to_json(out)),
        Format::Csv => csv_text(out),
        Format::Table => table_text(out),
    }
}

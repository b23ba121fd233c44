//! Rendering of command results as `key=value` lines, JSON or CSV.
//!
//! Floating-point values are printed with 10 significant digits in every
//! format, so a JSON document parsed back and re-rendered as plain text
//! reproduces the plain rendering byte for byte.

use std::fmt;

use serde_json::{Map, Number};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v.into())
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Value::Int(v.into())
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => f.write_str(&format_g10(*v)),
            Value::Int(v) => write!(f, "{v}"),
            Value::Text(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// C's `%.10g`, with `inf`, `-inf` and `nan` for non-finite values.
pub fn format_g10(x: f64) -> String {
    const PREC: i32 = 10;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{:.*e}", (PREC - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PREC).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PREC - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub type Record = Vec<(String, Value)>;

/// A flat record of scalar fields plus an optional table of rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Envelope {
    pub fields: Record,
    pub rows: Vec<Record>,
}

impl Envelope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_owned(), value.into()));
        self
    }

    pub fn push_field(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_owned(), value.into()));
    }

    pub fn push_row(&mut self, row: Record) {
        self.rows.push(row);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Plain => Ok(self.to_plain()),
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }

    /// Fields one per line, then each row as space-separated pairs.
    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(&format!("{k}={v}\n"));
        }
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// One JSON object; rows, if any, under `"rows"`.
    pub fn to_json(&self) -> String {
        let mut obj = record_to_json(&self.fields);
        if !self.rows.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|r| serde_json::Value::Object(record_to_json(r)))
                .collect();
            obj.insert("rows".into(), serde_json::Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(obj))
            .expect("serializing an in-memory JSON value");
        s.push('\n');
        s
    }

    /// The rows table, or a single row of the fields when there are no rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let table: Vec<&Record> = if self.rows.is_empty() {
            vec![&self.fields]
        } else {
            self.rows.iter().collect()
        };
        if let Some(first) = table.first() {
            w.write_record(first.iter().map(|(k, _)| k.as_str()))
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        for row in table {
            w.write_record(row.iter().map(|(_, v)| v.to_string()))
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    /// Inverse of [`Envelope::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::validation(format!("malformed result document: {msg}"));
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let serde_json::Value::Object(obj) = value else {
            return Err(bad("top level is not an object"));
        };
        let mut env = Envelope::new();
        for (k, v) in obj {
            if k == "rows" {
                let serde_json::Value::Array(rows) = v else {
                    return Err(bad("rows is not an array"));
                };
                for row in rows {
                    let serde_json::Value::Object(row) = row else {
                        return Err(bad("row is not an object"));
                    };
                    let rec = row
                        .into_iter()
                        .map(|(k, v)| Ok((k, json_to_value(v).ok_or_else(|| bad("nested value"))?)))
                        .collect::<Result<Record>>()?;
                    env.rows.push(rec);
                }
            } else {
                let v = json_to_value(v).ok_or_else(|| bad("nested value"))?;
                env.fields.push((k, v));
            }
        }
        Ok(env)
    }
}

fn record_to_json(rec: &Record) -> Map<String, serde_json::Value> {
    rec.iter()
        .map(|(k, v)| (k.clone(), value_to_json(v)))
        .collect()
}

fn value_to_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Num(x) => {
            let rounded: f64 = format_g10(*x).parse().unwrap_or(*x);
            Number::from_f64(rounded)
                .map(serde_json::Value::Number)
                .unwrap_or_else(|| serde_json::Value::String(format_g10(*x)))
        }
        Value::Int(i) => serde_json::Value::Number((*i).into()),
        Value::Text(s) => serde_json::Value::String(s.clone()),
        Value::Bool(b) => serde_json::Value::Bool(*b),
    }
}

fn json_to_value(v: serde_json::Value) -> Option<Value> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(Value::Int)
            .or_else(|| n.as_f64().map(Value::Num)),
        serde_json::Value::String(s) => Some(Value::Text(s)),
        serde_json::Value::Bool(b) => Some(Value::Bool(b)),
        _ => None,
    }
}

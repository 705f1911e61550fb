//! Rendering of JSON reports as JSON, CSV or plain text.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Every JSON number becomes its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(items) => Value::Array(items.into_iter().map(stringify_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Dotted-key flattening of nested objects and arrays.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn rows(v: &Value) -> Vec<Vec<(String, String)>> {
    let one = |v: &Value| {
        let mut out = Vec::new();
        flatten("", v, &mut out);
        out
    };
    match v {
        Value::Array(items) if items.iter().all(Value::is_object) => items.iter().map(one).collect(),
        other => vec![one(other)],
    }
}

fn write_csv(v: &Value, out: &mut impl Write) -> io::Result<()> {
    let rows = rows(v);
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header)?;
    for row in &rows {
        let lookup: Map<String, Value> = row.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        w.write_record(header.iter().map(|h| lookup.get(h).map(scalar).unwrap_or_default()))?;
    }
    w.flush()
}

fn write_text(v: &Value, out: &mut impl Write) -> io::Result<()> {
    for (n, row) in rows(v).iter().enumerate() {
        if n > 0 {
            writeln!(out)?;
        }
        for (k, v) in row {
            writeln!(out, "{k}: {v}")?;
        }
    }
    Ok(())
}

pub fn emit(v: Value, format: Format) -> io::Result<()> {
    let v = stringify_numbers(v);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &v)?;
            writeln!(out)
        }
        Format::Csv => write_csv(&v, &mut out),
        Format::Text => write_text(&v, &mut out),
    }
}

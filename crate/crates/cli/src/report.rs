//! Emission of result tables: a `#` metadata header, then CSV or JSON.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::CliError;

pub struct Meta {
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
    pub idle_schedule: &'static str,
    pub extra: Vec<(&'static str, Value)>,
}

impl Meta {
    fn fields(&self) -> Vec<(&'static str, Value)> {
        let mut v = vec![
            ("tool", json!(format!("qnc {}", env!("CARGO_PKG_VERSION")))),
            ("command", json!(self.command)),
            ("config", self.config.clone()),
            ("seed", self.seed.map_or(json!("none"), |s| json!(s))),
            ("idle_schedule", json!(self.idle_schedule)),
        ];
        v.extend(self.extra.iter().cloned());
        v
    }

    pub fn write_comment_header(&self, out: &mut Vec<u8>) {
        for (k, v) in self.fields() {
            let v = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            let _ = writeln!(out, "# {k}: {v}");
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.fields().into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

pub struct Table {
    pub meta: Meta,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Table {
    pub fn new(meta: Meta, columns: &[&'static str]) -> Self {
        Table { meta, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut out = Vec::new();
                self.meta.write_comment_header(&mut out);
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns).map_err(CliError::runtime)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(cell)).map_err(CliError::runtime)?;
                }
                w.into_inner().map_err(CliError::runtime)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.clone())).collect();
                        Value::Object(m)
                    })
                    .collect();
                let doc = json!({ "meta": self.meta.to_json(), "columns": self.columns, "rows": rows });
                Ok(pretty(&doc))
            }
        }
    }
}

pub fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("json values serialize");
    s.push(b'\n');
    s
}

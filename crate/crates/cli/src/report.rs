//! Versioned reports and their JSON, CSV and text renderings.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{Map, Value};

pub const REPORT_SCHEMA: &str = "qzeta-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config: Value,
    pub pass: bool,
    pub summary: Map<String, Value>,
    pub records: Vec<Value>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            command: command.to_string(),
            config,
            pass: true,
            summary: Map::new(),
            records: Vec::new(),
        }
    }

    /// Appends a record; `pass` is folded into the report verdict.
    pub fn push<T: Serialize>(&mut self, record: &T, pass: bool) {
        let mut v = serde_json::to_value(record).expect("records serialize");
        if let Value::Object(m) = &mut v {
            m.entry("pass").or_insert(Value::Bool(pass));
        }
        self.pass &= pass;
        self.records.push(v);
    }

    pub fn note<T: Serialize>(&mut self, key: &str, value: T) {
        self.summary.insert(
            key.to_string(),
            serde_json::to_value(value).expect("summary serializes"),
        );
    }

    pub fn failures(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.get("pass") == Some(&Value::Bool(false)))
            .count()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => render_csv(&self.records),
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let line = match r {
                Value::Object(m) => m
                    .iter()
                    .map(|(k, v)| format!("{k}={}", scalar(v)))
                    .collect::<Vec<_>>()
                    .join(" "),
                other => scalar(other),
            };
            out.push_str(&line);
            out.push('\n');
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k}: {}\n", scalar(v)));
        }
        out.push_str(&format!(
            "{} {}: {} records, {} failed\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.command,
            self.records.len(),
            self.failures()
        ));
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(records: &[Value]) -> String {
    let mut cols = BTreeSet::new();
    for r in records {
        if let Value::Object(m) = r {
            cols.extend(m.keys().cloned());
        }
    }
    let cols: Vec<String> = cols.into_iter().collect();
    let mut out = cols.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for r in records {
        let row: Vec<String> = cols
            .iter()
            .map(|c| csv_field(&r.get(c).map(scalar).unwrap_or_default()))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

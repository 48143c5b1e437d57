use std::io::Write;

use anyhow::Result;
use serde_json::{json, Map, Value};
use wreathdim::config::Format;
use wreathdim::suite::SCHEMA_VERSION;
use wreathdim::{Error, SpecHash};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A versioned table report. JSON carries `detail` as well; CSV writes a
/// header comment and the table only.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    pub spec_hashes: Vec<SpecHash>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub detail: Value,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Report {
            command,
            passed: true,
            spec_hashes: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            detail: Value::Null,
        }
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn hash(&mut self, h: SpecHash) {
        if !self.spec_hashes.contains(&h) {
            self.spec_hashes.push(h);
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Map<String, Value>> = self
            .rows
            .iter()
            .map(|r| {
                self.columns
                    .iter()
                    .map(|c| c.to_string())
                    .zip(r.iter().cloned())
                    .collect()
            })
            .collect();
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "toolkit_version": TOOLKIT_VERSION,
            "command": self.command,
            "passed": self.passed,
            "spec_hashes": self.spec_hashes,
            "rows": rows,
        });
        if !self.detail.is_null() {
            v["detail"] = self.detail.clone();
        }
        v
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)?;
            }
            Format::Csv => {
                writeln!(
                    out,
                    "# wreathdim {} schema {} command {} passed {}",
                    TOOLKIT_VERSION, SCHEMA_VERSION, self.command, self.passed
                )?;
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(cell))?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// The structured error printed on stderr.
pub fn error_report(e: &anyhow::Error) -> String {
    let error = match e.downcast_ref::<Error>() {
        Some(Error::Config { key, message }) => {
            json!({ "kind": "config", "key": key, "message": message })
        }
        Some(Error::Budget { budget }) => {
            json!({ "kind": "budget", "budget": budget, "message": e.to_string() })
        }
        Some(other) => json!({ "kind": kind(other), "message": other.to_string() }),
        None => json!({ "kind": "io", "message": format!("{e:#}") }),
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "toolkit_version": TOOLKIT_VERSION,
        "passed": false,
        "error": error,
    });
    serde_json::to_string_pretty(&report).unwrap_or_default()
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Encoding(_) => "encoding",
        Error::Budget { .. } => "budget",
        Error::Structure(_) => "structure",
        Error::Unsupported(_) => "unsupported",
        Error::InvalidInput(_) => "invalid_input",
        Error::Precondition(_) => "precondition",
        Error::Config { .. } => "config",
        Error::Integrity(_) => "integrity",
        Error::Io(_) => "io",
    }
}

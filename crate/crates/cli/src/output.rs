//! Tables, run manifests and their CSV/JSON encodings.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use photodress::units::UnitContext;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub units: UnitContext,
    pub version: String,
    /// RFC 3339, or null when suppressed.
    pub timestamp: Option<String>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, timestamp: bool) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            units: UnitContext::default(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp.then(|| chrono::Utc::now().to_rfc3339()),
            warnings: Vec::new(),
        }
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("command: {}", self.command),
            format!("parameters: {}", self.parameters),
            format!("units: {}", self.units.system),
            format!("intensity convention: {}", self.units.intensity_convention),
            format!("version: {}", self.version),
            format!(
                "timestamp: {}",
                self.timestamp.as_deref().unwrap_or("omitted")
            ),
        ];
        lines.extend(self.warnings.iter().map(|w| format!("warning: {w}")));
        lines
    }
}

/// Fixed columns with a unit in every numeric header.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_table(
    out: &mut dyn Write,
    manifest: &RunManifest,
    table: &Table,
    format: Format,
) -> Result<()> {
    match format {
        Format::Csv => {
            for line in manifest.comment_lines() {
                writeln!(out, "# {line}")?;
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(cell))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let map: Map<String, Value> = table
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().cloned())
                        .collect();
                    Value::Object(map)
                })
                .collect();
            let envelope = serde_json::json!({ "manifest": manifest, "rows": rows });
            serde_json::to_writer_pretty(&mut *out, &envelope)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

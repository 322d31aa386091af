use crate::{Format, OutputArgs};
use anyhow::{Context, Result};
use serde_json::Value;
use std::io::Write;

/// Flat rows for CSV output.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub fn emit(out: &OutputArgs, json: &Value, table: impl FnOnce() -> Table) -> Result<()> {
    let bytes = match out.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let t = table();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.header)?;
            for r in &t.rows {
                w.write_record(r)?;
            }
            w.into_inner().context("flushing csv")?
        }
    };
    match &out.output {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

/// Shortest round-trip representation, as serde_json prints it.
pub fn num(x: f64) -> String {
    serde_json::Value::from(x).to_string()
}

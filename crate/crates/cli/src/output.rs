//! CSV tables and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const MANIFEST: &str = "manifest.json";

/// One CSV file: header cells name their units in brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &str, header: &[&str]) -> Table {
        Table { file: file.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "{}", self.file);
        self.rows.push(row);
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(dir.join(&self.file))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read(dir: &Path, file: &str) -> Result<Table> {
        let path = dir.join(file);
        if !path.exists() {
            return Err(CliError::MissingOutputs(path.display().to_string()));
        }
        let mut r = csv::Reader::from_path(&path)?;
        let header = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Table { file: file.to_string(), header, rows })
    }

    /// Index of the column whose name, without its unit, is `name`.
    pub fn col(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h.split(" [").next() == Some(name))
            .ok_or_else(|| CliError::MissingOutputs(format!("{}: no column {name:?}", self.file)))
    }

    /// Column `name` parsed as reals; empty cells become `None`.
    pub fn reals(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let j = self.col(name)?;
        self.rows
            .iter()
            .map(|r| {
                let c = r[j].trim();
                if c.is_empty() {
                    Ok(None)
                } else {
                    c.parse()
                        .map(Some)
                        .map_err(|_| CliError::MissingOutputs(format!("{}: bad number {c:?} in {name}", self.file)))
                }
            })
            .collect()
    }

    pub fn texts(&self, name: &str) -> Result<Vec<String>> {
        let j = self.col(name)?;
        Ok(self.rows.iter().map(|r| r[j].clone()).collect())
    }
}

/// Formats a real for CSV; the shortest text that parses back exactly.
pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub version: String,
    /// The resolved config as `key = value` lines.
    pub config: String,
    pub wall_time_s: f64,
    /// Seconds spent in named sections.
    pub timings: BTreeMap<String, f64>,
    pub outputs: Vec<String>,
    pub fitted: BTreeMap<String, f64>,
    pub summary: serde_json::Value,
}

impl Manifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Manifest> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path).map_err(|_| CliError::MissingOutputs(path.display().to_string()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

//! Table rendering, output sinks and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use dirac_su11::params::ConfigFile;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Floats with 17 significant digits, '.' decimal separator.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header plus rows, rendered as CSV or as a JSON array of records.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => num(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Float(v) => serde_json::Value::from(*v),
            Cell::Text(s) => serde_json::Value::from(s.clone()),
        }
    }
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json_records(&self) -> serde_json::Value {
        self.rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => pretty(&self.json_records()),
        }
    }
}

pub fn pretty<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are always serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridManifest {
    pub npoints: usize,
    pub rmax_scale: f64,
    pub fd_order: usize,
}

/// Everything needed to reproduce one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub config: ConfigFile,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridManifest>,
    pub wall_time_seconds: f64,
    pub output_sha256: String,
    pub output_bytes: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Writes the body to `out` (or stdout) and the manifest next to it (or to stderr).
pub fn emit(
    body: &str,
    out: Option<&Path>,
    command: &str,
    arguments: Vec<String>,
    config: ConfigFile,
    grid: Option<GridManifest>,
    elapsed: Duration,
) -> Result<()> {
    let manifest = RunManifest {
        command: command.to_string(),
        arguments,
        config,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        grid,
        wall_time_seconds: elapsed.as_secs_f64(),
        output_sha256: sha256_hex(body.as_bytes()),
        output_bytes: body.len(),
    };
    let text = pretty(&manifest);
    match out {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            let mpath = manifest_path(path);
            fs::write(&mpath, text).with_context(|| format!("writing {}", mpath.display()))?;
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            std::io::stderr().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Report format; each subcommand has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Report file. A manifest is written next to it as `<out>.manifest.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Header plus rows, already rendered as text.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| io::Error::other(e.to_string()))
    }
}

/// Shortest round-tripping text for `x`, switching to exponent form for very
/// large or small magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e7).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: String,
    #[serde(flatten)]
    report: &'a T,
}

/// Everything a subcommand produces.
pub struct Report<T: Serialize> {
    pub body: T,
    pub table: Table,
    pub default_format: Format,
    pub counters: BTreeMap<&'static str, u64>,
    /// `false` when a checked mathematical statement was falsified.
    pub holds: bool,
}

pub fn render<T: Serialize>(
    subcommand: &str,
    report: &Report<T>,
    format: Format,
) -> io::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let env = Envelope {
                schema: format!("{subcommand}/v1"),
                report: &report.body,
            };
            let mut bytes = serde_json::to_vec_pretty(&env).map_err(io::Error::other)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => report.table.to_csv(),
    }
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    schema: &'static str,
    subcommand: &'a str,
    version: &'static str,
    config: &'a C,
    format: Format,
    outputs: Vec<String>,
    duration_secs: f64,
    counters: &'a BTreeMap<&'static str, u64>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes the report to `--out` (plus its manifest) or to stdout.
pub fn write_outputs<C: Serialize>(
    subcommand: &str,
    config: &C,
    out: Option<&Path>,
    format: Format,
    bytes: &[u8],
    counters: &BTreeMap<&'static str, u64>,
    elapsed: Duration,
) -> io::Result<()> {
    let Some(path) = out else {
        return io::stdout().lock().write_all(bytes);
    };
    fs::write(path, bytes)?;
    let manifest = Manifest {
        schema: "manifest/v1",
        subcommand,
        version: env!("CARGO_PKG_VERSION"),
        config,
        format,
        outputs: vec![path.display().to_string()],
        duration_secs: elapsed.as_secs_f64(),
        counters,
    };
    let mut text = serde_json::to_vec_pretty(&manifest).map_err(io::Error::other)?;
    text.push(b'\n');
    fs::write(manifest_path(path), text)
}

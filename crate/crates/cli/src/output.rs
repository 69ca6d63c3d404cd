//! Deterministic, atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::config::Format;

/// Write `bytes` to `path` through a temporary file in the same directory and
/// an atomic rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Columns of equal length with a header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str], columns: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(header.len(), columns.len());
        debug_assert!(columns.windows(2).all(|w| w[0].len() == w[1].len()));
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.len())
    }

    /// CSV with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for i in 0..self.rows() {
            let row: Vec<String> = self.columns.iter().map(|c| fmt_f64(c[i])).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    /// JSON object mapping each header to its column.
    pub fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (h, c) in self.header.iter().zip(&self.columns) {
            map.insert(h.clone(), serde_json::json!(c));
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("table serializes");
        s.push('\n');
        s
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Collects the files a command writes.
#[derive(Debug)]
pub struct OutputDir {
    pub dir: PathBuf,
    pub format: Format,
    pub written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn new(dir: impl Into<PathBuf>, format: Format) -> Self {
        Self {
            dir: dir.into(),
            format,
            written: Vec::new(),
        }
    }

    /// Write a data table as `<stem>.csv` or `<stem>.json`.
    pub fn table(&mut self, stem: &str, table: &Table) -> anyhow::Result<PathBuf> {
        let (ext, body) = match self.format {
            Format::Csv => ("csv", table.to_csv()),
            Format::Json => ("json", table.to_json()),
        };
        self.raw(&format!("{stem}.{ext}"), body.as_bytes())
    }

    /// Write a JSON report.
    pub fn report<T: Serialize>(&mut self, name: &str, report: &T) -> anyhow::Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(report)?;
        s.push('\n');
        self.raw(name, s.as_bytes())
    }

    pub fn raw(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        self.written.push(path.clone());
        Ok(path)
    }
}

/// A stand-alone matplotlib script that plots every CSV table in its
/// directory, first column against the others.
pub const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
import csv
import pathlib

import matplotlib.pyplot as plt

here = pathlib.Path(__file__).resolve().parent
for path in sorted(here.glob("*.csv")):
    with path.open() as f:
        rows = list(csv.reader(f))
    header, data = rows[0], rows[1:]
    if len(header) > 4:
        continue  # heat maps
    cols = list(zip(*[[float(v) for v in r] for r in data]))
    fig, ax = plt.subplots()
    for name, col in zip(header[1:], cols[1:]):
        ax.plot(cols[0], col, label=name)
    if header[0] == "index":
        ax.set_yscale("log")
    ax.set_xlabel(header[0])
    ax.legend()
    ax.set_title(path.stem)
    fig.savefig(path.with_suffix(".png"), dpi=150)
    plt.close(fig)
"#;

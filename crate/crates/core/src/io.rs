//! Run artifacts: CSV tables, JSON summaries, the run manifest and plot scripts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Hex-encoded SHA-256 of a byte string.
pub fn digest(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    d.iter().map(|b| format!("{b:02x}")).collect()
}

/// A small in-memory table written out as CSV.
///
/// Floats are printed with a fixed number of significant digits so the same
/// inputs always give the same bytes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }
}

/// Float cell with 10 significant digits.
pub fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.9e}")
    } else {
        x.to_string()
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// What a run was asked to do and what it produced.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub workers: usize,
    pub crate_version: String,
    pub parameters: serde_json::Value,
    pub artifacts: Vec<Artifact>,
    /// Set when the run stopped early; the artifacts are then incomplete.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
}

impl Manifest {
    pub fn new(command: &str, seed: u64, workers: usize, parameters: serde_json::Value) -> Self {
        Manifest {
            command: command.into(),
            seed,
            workers,
            crate_version: env!("CARGO_PKG_VERSION").into(),
            parameters,
            artifacts: Vec::new(),
            partial: None,
        }
    }

    /// Writes `text` under `dir` and records its digest.
    pub fn emit(&mut self, dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
        let path = dir.join(name);
        write_text(&path, text)?;
        self.artifacts.push(Artifact {
            path: name.into(),
            sha256: digest(text.as_bytes()),
        });
        Ok(path)
    }

    pub fn finish(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join("manifest.json"), self)
    }
}

/// Gnuplot script drawing `y` against `x` (columns by 1-based index) on
/// log-log axes, with optional error bars in column `err`.
pub fn loglog_script(csv: &str, x: usize, y: usize, err: Option<usize>, title: &str) -> String {
    let using = match err {
        Some(e) => format!("{x}:{y}:{e} with yerrorbars"),
        None => format!("{x}:{y} with linespoints"),
    };
    format!(
        "set datafile separator ','\nset logscale xy\nset key off\nset title '{title}'\n\
         plot '{csv}' every ::1 using {using}\n"
    )
}

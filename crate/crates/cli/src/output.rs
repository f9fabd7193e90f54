//! CSV and manifest writing. Numeric formatting is fixed so a given seed
//! produces byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

use onebit_mimo::SystemConfig;

/// Fixed scientific formatting for measured values.
pub fn sci(value: f64) -> String {
    format!("{value:.10e}")
}

/// Fixed two-decimal formatting for dB grid points.
pub fn db(value: f64) -> String {
    format!("{value:.2}")
}

pub struct CsvFile {
    path: PathBuf,
    rows: Vec<String>,
}

impl CsvFile {
    /// Start a CSV with a header row naming columns and units.
    pub fn new(path: PathBuf, header: &str) -> Self {
        CsvFile { path, rows: vec![header.to_string()] }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.rows.push(fields.join(","));
    }

    pub fn write(self) -> Result<PathBuf> {
        let mut text = self.rows.join("\n");
        text.push('\n');
        fs::write(&self.path, text).with_context(|| format!("writing {}", self.path.display()))?;
        Ok(self.path)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    version: &'a str,
    seed: u64,
    trials: usize,
    processing: &'a str,
    config: &'a SystemConfig,
    outputs: Vec<String>,
    timings_ms: Vec<(String, u128)>,
}

/// Tracks outputs and per-stage timings for one run and writes the manifest.
pub struct RunLog {
    out_dir: PathBuf,
    outputs: Vec<PathBuf>,
    timings: Vec<(String, u128)>,
    stage_start: Instant,
}

impl RunLog {
    pub fn new(out_dir: &Path) -> Result<Self> {
        fs::create_dir_all(out_dir)
            .with_context(|| format!("creating {}", out_dir.display()))?;
        Ok(RunLog {
            out_dir: out_dir.to_path_buf(),
            outputs: Vec::new(),
            timings: Vec::new(),
            stage_start: Instant::now(),
        })
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn record(&mut self, path: PathBuf) {
        self.outputs.push(path);
    }

    /// Close the current timing stage under `label`.
    pub fn stage(&mut self, label: &str) {
        self.timings.push((label.to_string(), self.stage_start.elapsed().as_millis()));
        self.stage_start = Instant::now();
    }

    pub fn finish(
        mut self,
        experiment: &str,
        config: &SystemConfig,
        trials: usize,
        processing: &str,
    ) -> Result<Vec<PathBuf>> {
        let manifest = Manifest {
            experiment,
            version: env!("CARGO_PKG_VERSION"),
            seed: config.seed,
            trials,
            processing,
            config,
            outputs: self.outputs.iter().map(|p| p.display().to_string()).collect(),
            timings_ms: std::mem::take(&mut self.timings),
        };
        let path = self.out_dir.join("manifest.json");
        let mut file =
            fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
        writeln!(file, "{}", serde_json::to_string_pretty(&manifest)?)?;
        self.outputs.push(path);
        Ok(self.outputs)
    }
}

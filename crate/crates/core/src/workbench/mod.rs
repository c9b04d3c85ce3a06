//! Command runners behind the `delaykern` binary: JSON configs in, CSV, JSON,
//! or SVG files out. Every runner is deterministic for fixed inputs.

mod commands;
pub mod csv;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use commands::{
    run_circulant, run_rd_kernels, run_regions, run_scalar_sweep, run_verify, CirculantConfig, RdKernelsConfig,
    RegionsConfig, ScalarSweepConfig, VerifyConfig, VerifyRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Regions,
    ScalarSweep,
    RdKernels,
    Circulant,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

/// Files written by one command, in write order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub command: Command,
    pub files: Vec<PathBuf>,
}

/// Output directory owned by one command run.
pub struct Output {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    fn finish(self, command: Command) -> RunSummary {
        RunSummary { command, files: self.files }
    }
}

/// Parse a JSON config; a missing path gives the defaults.
pub fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

pub fn run(command: Command, config: Option<&Path>, out: &Path, format: Format) -> Result<RunSummary> {
    let mut output = Output::new(out)?;
    match command {
        Command::Regions => run_regions(&load_config(config)?, format, &mut output)?,
        Command::ScalarSweep => run_scalar_sweep(&load_config(config)?, format, &mut output)?,
        Command::RdKernels => run_rd_kernels(&load_config(config)?, format, &mut output)?,
        Command::Circulant => run_circulant(&load_config(config)?, format, &mut output)?,
        Command::Verify => run_verify(&load_config(config)?, format, &mut output)?,
    }
    Ok(output.finish(command))
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(msg()))
    }
}

//! Run configuration. Every setting comes from, in decreasing priority, a
//! command-line flag, a `FRAMECURVE_*` environment variable, the TOML file
//! named by `--config`, or the built-in default.

use std::path::PathBuf;

use clap::Args;
use framecurve::{DPConfig, Mode};
use serde::Deserialize;

use crate::error::{CliError, Result};

/// Settings shared by all commands. Unset values fall through to the file
/// and then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with defaults for the settings below.
    #[arg(long, global = true, env = "FRAMECURVE_CONFIG")]
    pub config: Option<PathBuf>,
    /// Shape space: open-framed, open-unframed, closed-framed, closed-unframed or planar.
    #[arg(long, global = true, env = "FRAMECURVE_MODE")]
    pub mode: Option<String>,
    /// Number of grid intervals; inputs are resampled to it.
    #[arg(long, global = true, env = "FRAMECURVE_GRID")]
    pub grid: Option<usize>,
    /// Geodesic segments.
    #[arg(long, global = true, env = "FRAMECURVE_STEPS")]
    pub steps: Option<usize>,
    #[arg(long, global = true, env = "FRAMECURVE_DP_WINDOW")]
    pub dp_window: Option<usize>,
    #[arg(long, global = true, env = "FRAMECURVE_SEED_STRIDE")]
    pub seed_stride: Option<usize>,
    #[arg(long, global = true, env = "FRAMECURVE_MAX_ITERS")]
    pub max_iters: Option<usize>,
    #[arg(long, global = true, env = "FRAMECURVE_TOL")]
    pub tol: Option<f64>,
    /// Random seed (clustering, synthetic rotations).
    #[arg(long, global = true, env = "FRAMECURVE_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mode: Option<String>,
    grid: Option<usize>,
    steps: Option<usize>,
    dp_window: Option<usize>,
    seed_stride: Option<usize>,
    max_iters: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub grid: usize,
    pub steps: usize,
    pub dp: DPConfig,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::ClosedFramed,
            grid: 256,
            steps: 10,
            dp: DPConfig::default(),
            seed: 0,
        }
    }
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => {
                let text = crate::io::read(path)?;
                toml::from_str::<FileConfig>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let d = RunConfig::default();
        let mode = match self.mode.as_ref().or(file.mode.as_ref()) {
            Some(m) => m
                .parse()
                .map_err(|e: framecurve::Error| CliError::Config(e.to_string()))?,
            None => d.mode,
        };
        let cfg = RunConfig {
            mode,
            grid: self.grid.or(file.grid).unwrap_or(d.grid),
            steps: self.steps.or(file.steps).unwrap_or(d.steps),
            dp: DPConfig {
                window: self.dp_window.or(file.dp_window).unwrap_or(d.dp.window),
                seed_stride: self.seed_stride.or(file.seed_stride).unwrap_or(d.dp.seed_stride),
                max_iters: self.max_iters.or(file.max_iters).unwrap_or(d.dp.max_iters),
                tol: self.tol.or(file.tol).unwrap_or(d.dp.tol),
            },
            seed: self.seed.or(file.seed).unwrap_or(d.seed),
        };
        cfg.dp.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.steps < 1 {
            return Err(CliError::Config("steps must be at least 1".into()));
        }
        framecurve::GridSpec::new(cfg.grid).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

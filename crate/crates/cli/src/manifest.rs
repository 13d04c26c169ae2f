//! Run manifests: a single JSON document describing a sweep. Command-line
//! flags override manifest fields; the resolved manifest is written next to
//! the outputs so a run can be reproduced bit-for-bit.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Glauber2d {
        #[serde(default = "default_l")]
        size: usize,
        tau_q: Vec<f64>,
        #[serde(default = "default_seeds")]
        seeds: u64,
        /// Measurement times in units of t_hat.
        times: Vec<f64>,
        #[serde(default = "default_rmax_ising")]
        rmax: usize,
        #[serde(default)]
        seed_base: u64,
    },
    Xychain {
        tau_q: Vec<f64>,
        /// Scaled times t/t_hat.
        times: Vec<f64>,
        #[serde(default)]
        sites: Option<usize>,
        #[serde(default)]
        rmax: Option<usize>,
        #[serde(default = "default_method")]
        method: String,
    },
    Randomising {
        #[serde(default = "default_rim_sites")]
        sites: usize,
        tau_q: Vec<f64>,
        #[serde(default = "default_realizations")]
        realizations: usize,
        #[serde(default = "default_dt")]
        dt: f64,
        /// Scaled times t/t_hat.
        times: Vec<f64>,
        #[serde(default = "default_rim_a")]
        rim_a: f64,
        #[serde(default)]
        seed_base: u64,
        #[serde(default = "default_rim_rmax")]
        rmax: usize,
        /// Record excitation density instead of correlators.
        #[serde(default)]
        observable: RimObservable,
    },
    Longrange {
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default = "default_lr_sites")]
        sites: usize,
        #[serde(default)]
        mode: LrMode,
        #[serde(default)]
        tau_q: Vec<f64>,
        /// Scaled times for linear quenches, raw times for sudden ones,
        /// epsilon values for statics.
        times: Vec<f64>,
        #[serde(default = "default_lr_rmax")]
        rmax: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RimObservable {
    #[default]
    Correlations,
    ExcitationDensity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LrMode {
    Static,
    #[default]
    Linear,
    SuddenInf,
    SuddenFinite,
}

fn default_l() -> usize { 1024 }
fn default_seeds() -> u64 { 50 }
fn default_rmax_ising() -> usize { 128 }
fn default_method() -> String { "weber".into() }
fn default_rim_sites() -> usize { 256 }
fn default_realizations() -> usize { 30 }
fn default_dt() -> f64 { 0.01 }
fn default_rim_a() -> f64 { 0.118 }
fn default_rim_rmax() -> usize { 64 }
fn default_alpha() -> f64 { 1.5 }
fn default_lr_sites() -> usize { 1 << 16 }
fn default_lr_rmax() -> usize { 4096 }

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(default = "schema_default")]
    pub schema_version: u32,
    #[serde(flatten)]
    pub model: ModelSpec,
    pub output_dir: PathBuf,
}

fn schema_default() -> u32 {
    SCHEMA_VERSION
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        let m: RunManifest = serde_json::from_str(&text).context("parsing manifest")?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version);
        }
        match &self.model {
            ModelSpec::Glauber2d { size, tau_q, times, rmax, .. } => {
                if size % 64 != 0 {
                    bail!("glauber2d size must be a multiple of 64");
                }
                if tau_q.iter().any(|&t| t <= 0.0) {
                    bail!("tau_q must be positive");
                }
                if *rmax >= size / 2 {
                    bail!("rmax must be below size/2");
                }
                let _ = times;
            }
            ModelSpec::Xychain { tau_q, .. } => {
                if tau_q.iter().any(|&t| t <= 0.0) {
                    bail!("tau_q must be positive");
                }
            }
            ModelSpec::Randomising { sites, tau_q, dt, rmax, .. } => {
                if sites % 2 != 0 {
                    bail!("randomising sites must be even");
                }
                if *dt > 0.01 {
                    bail!("dt must be <= 0.01");
                }
                if sites < &(4 * rmax) {
                    bail!("need sites >= 4 rmax");
                }
                if tau_q.iter().any(|&t| t <= 0.0) {
                    bail!("tau_q must be positive");
                }
            }
            ModelSpec::Longrange { alpha, sites, mode, tau_q, .. } => {
                if !(*alpha > 1.0 && *alpha < 2.0) {
                    bail!("alpha must lie strictly inside (1, 2)");
                }
                if sites % 2 != 0 {
                    bail!("longrange sites must be even");
                }
                if *mode == LrMode::Linear && tau_q.is_empty() {
                    bail!("linear quench needs tau_q values");
                }
            }
        }
        Ok(())
    }

    /// Write the resolved manifest next to the run outputs.
    pub fn write_resolved(&self) -> Result<()> {
        std::fs::create_dir_all(&self.output_dir)?;
        let path = self.output_dir.join("manifest.resolved.json");
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

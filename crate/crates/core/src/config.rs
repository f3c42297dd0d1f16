//! Experiment configuration files and the bundled presets.
//!
//! A configuration is a TOML document with flat estimator keys and one
//! `[[pairs]]` table per generator. Unknown keys are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hyperbolic::{BoundaryPoint, H3Point};
use crate::io::hash_bytes;
use crate::patterson::AtomicMeasure;
use crate::schottky::table::{parse_complex, PairRow};
use crate::schottky::{DiskPair, SchottkyGroup};

/// A configuration error with the offending field or source line.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(String),
    #[error("field `{field}`: {msg}")]
    Field { field: &'static str, msg: String },
}

fn bad(field: &'static str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, msg: msg.into() }
}

/// All knobs of an experiment; see the bundled presets for typical values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: Option<u64>,
    pub out: Option<String>,
    /// Known critical exponent; estimated from `delta_len` when absent.
    pub delta: Option<f64>,
    /// Word length for critical-exponent estimates.
    pub delta_len: usize,
    /// Word length of the Patterson–Sullivan truncation.
    pub max_len: usize,
    /// Exponent offset s − δ̂ used to build ν.
    pub s_offset: f64,
    pub max_atoms: usize,
    /// Box half-width ρ.
    pub rho: f64,
    pub dt: f64,
    /// Orbit horizons T.
    pub horizons: Vec<f64>,
    pub window_r: Vec<f64>,
    pub bins: usize,
    pub directions: usize,
    /// Number of sampled starting frames.
    pub starts: usize,
    /// Polar rings of the leaf quadrature.
    pub rings: usize,
    /// Flow times for conditional and mixing estimates.
    pub s_grid: Vec<f64>,
    /// Truncation lengths for energy refinement.
    pub energy_lens: Vec<usize>,
    /// Seeds for reproducibility spreads.
    pub seeds: Vec<u64>,
    /// Monte Carlo samples per correlation estimate.
    pub mc_samples: usize,
    /// Flow times for correlation estimates.
    pub mixing_s: Vec<f64>,
    /// Horizons T of the window statistic.
    pub window_horizons: Vec<f64>,
    /// Times of the Hopf ratio sequence.
    pub hopf_times: Vec<f64>,
    /// A single atom replacing ν, for closed-form checks.
    pub atom: Option<String>,
    /// Probe point `[re, im, t]` for pointwise checks.
    pub probe: Option<[f64; 3]>,
    /// Finite-difference step factor.
    pub fd_step: f64,
    pub pairs: Vec<PairRow>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "experiment".into(),
            seed: None,
            out: None,
            delta: None,
            delta_len: 10,
            max_len: 9,
            s_offset: 0.02,
            max_atoms: 2_000_000,
            rho: 0.3,
            dt: 0.025,
            horizons: vec![50.0, 100.0, 200.0],
            window_r: vec![0.1, 0.2, 0.3, 0.4],
            bins: 64,
            directions: 64,
            starts: 100,
            rings: 4,
            s_grid: vec![2.0, 4.0, 6.0, 8.0],
            energy_lens: vec![5, 6, 7, 8],
            seeds: vec![0, 1, 2],
            mc_samples: 20_000,
            mixing_s: vec![0.0, 1.0, 2.0, 4.0, 6.0],
            window_horizons: vec![50.0, 100.0],
            hopf_times: vec![25.0, 50.0, 100.0, 200.0],
            atom: None,
            probe: None,
            fd_step: 1e-3,
            pairs: Vec::new(),
        }
    }
}

/// A parsed configuration with the hash of its source bytes.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub hash: String,
}

impl ExperimentConfig {
    /// Parses and validates a configuration document.
    pub fn parse(text: &str) -> Result<LoadedConfig, ConfigError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(LoadedConfig { config, hash: hash_bytes(text.as_bytes()) })
    }

    /// Checks every knob against its valid range.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.pairs.is_empty() && self.atom.is_none() {
            return Err(bad("pairs", "need at least two [[pairs]] or a single `atom`"));
        }
        if !self.pairs.is_empty() {
            self.group()?;
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d <= 2.0) {
                return Err(bad("delta", format!("{d} outside (0, 2]")));
            }
        }
        if !(6..=14).contains(&self.delta_len) {
            return Err(bad("delta_len", format!("{} outside 6..=14", self.delta_len)));
        }
        if !(2..=14).contains(&self.max_len) {
            return Err(bad("max_len", format!("{} outside 2..=14", self.max_len)));
        }
        if !(self.s_offset > 0.0 && self.s_offset < 0.5) {
            return Err(bad("s_offset", format!("{} outside (0, 0.5)", self.s_offset)));
        }
        if self.max_atoms < 1000 {
            return Err(bad("max_atoms", "must be at least 1000"));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(bad("rho", format!("{} outside (0, 1)", self.rho)));
        }
        if !(self.dt > 0.0 && self.dt <= self.rho / 10.0 + 1e-12) {
            return Err(bad("dt", format!("{} must lie in (0, rho/10]", self.dt)));
        }
        if self.horizons.is_empty() || self.horizons.iter().any(|t| !(*t > 0.0)) {
            return Err(bad("horizons", "need positive horizons"));
        }
        if self.window_r.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(bad("window_r", "every r must lie in (0, 1)"));
        }
        if self.bins < 16 {
            return Err(bad("bins", format!("{} < 16", self.bins)));
        }
        if self.directions == 0 {
            return Err(bad("directions", "must be positive"));
        }
        if self.starts == 0 {
            return Err(bad("starts", "must be positive"));
        }
        if !(1..=64).contains(&self.rings) {
            return Err(bad("rings", format!("{} outside 1..=64", self.rings)));
        }
        if self.s_grid.iter().any(|s| !(*s >= 0.0)) {
            return Err(bad("s_grid", "flow times must be non-negative"));
        }
        if self.energy_lens.len() < 2 || self.energy_lens.iter().any(|l| !(2..=10).contains(l)) {
            return Err(bad("energy_lens", "need at least two lengths in 2..=10"));
        }
        if self.seeds.is_empty() {
            return Err(bad("seeds", "need at least one seed"));
        }
        if self.mc_samples < 100 {
            return Err(bad("mc_samples", "must be at least 100"));
        }
        if self.mixing_s.iter().any(|s| !(*s >= 0.0)) {
            return Err(bad("mixing_s", "flow times must be non-negative"));
        }
        let positive = |v: &[f64]| !v.is_empty() && v.iter().all(|t| *t > 0.0);
        if !positive(&self.window_horizons) {
            return Err(bad("window_horizons", "need positive horizons"));
        }
        if !positive(&self.hopf_times) || self.hopf_times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(bad("hopf_times", "need increasing positive times"));
        }
        if let Some(a) = &self.atom {
            parse_complex(a).map_err(|e| bad("atom", e.to_string()))?;
        }
        if let Some([_, _, t]) = self.probe {
            if !(t > 0.0) {
                return Err(bad("probe", "height must be positive"));
            }
        }
        if !(1e-4..=1e-2).contains(&self.fd_step) {
            return Err(bad("fd_step", format!("{} outside [1e-4, 1e-2]", self.fd_step)));
        }
        Ok(())
    }

    pub fn disk_pairs(&self) -> Result<Vec<DiskPair>, ConfigError> {
        self.pairs.iter().map(|p| p.to_pair().map_err(|e| bad("pairs", e.to_string()))).collect()
    }

    /// The Schottky group of the `[[pairs]]` table.
    pub fn group(&self) -> Result<SchottkyGroup, ConfigError> {
        SchottkyGroup::build(&self.disk_pairs()?).map_err(|e| bad("pairs", e.to_string()))
    }

    /// The unit atom of the `atom` key, if present.
    pub fn single_atom(&self) -> Option<AtomicMeasure> {
        let z: Complex64 = parse_complex(self.atom.as_ref()?).ok()?;
        Some(AtomicMeasure::dirac(BoundaryPoint::Finite(z), 1.0))
    }

    pub fn probe_point(&self) -> Option<H3Point> {
        self.probe.map(|[x, y, t]| H3Point { z: Complex64::new(x, y), t })
    }
}

/// Bundled configurations as (name, TOML source).
pub const PRESETS: &[(&str, &str)] = &[
    ("fuchsian", include_str!("../configs/fuchsian.toml")),
    ("thin", include_str!("../configs/thin.toml")),
    ("octahedral", include_str!("../configs/octahedral.toml")),
    ("symmetric", include_str!("../configs/symmetric.toml")),
    ("single_atom", include_str!("../configs/single_atom.toml")),
];

/// Source text of a bundled configuration.
pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled configuration.
pub fn load_preset(name: &str) -> Result<LoadedConfig, ConfigError> {
    ExperimentConfig::parse(preset(name).ok_or_else(|| ConfigError::Parse(format!("no preset named {name:?}")))?)
}

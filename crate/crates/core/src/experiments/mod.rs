//! Experiment drivers shared by the command line and the acceptance suite.
//!
//! A [`Lab`] holds a parsed configuration together with lazily computed
//! shared state (the group, δ̂, ν and a reference box). Each driver returns a
//! [`Report`] with key numbers, an optional pass flag and CSV artifacts whose
//! bytes depend only on the configuration, the seed and the crate version.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{ConfigError, ExperimentConfig, LoadedConfig};
use crate::error::{AnalysisError, GeometryError, MeasureError, PattersonError, SchottkyError};
use crate::hyperbolic::{BoundaryPoint, H3Point};
use crate::io::IoError;
use crate::measures::{gromov_kernel, normalize_bms, BoxSpec, FramePoint};
use crate::patterson::{build_ps, estimate_delta_series, AtomicMeasure, DeltaEstimate, PsOptions};
use crate::schottky::SchottkyGroup;

mod dynamics;
mod geometry;
mod measures;
pub mod suite;

pub use dynamics::{escape, flow, hopf, window};
pub use geometry::{boxdim, energy, estimate_delta, geometry_suite, project, ps_build, reduction_suite, shadow};
pub use measures::{conditional, mixing, phi0_check};

/// Crate version embedded in every summary.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failures of an experiment, tagged by the layer that raised them.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Schottky(#[from] SchottkyError),
    #[error(transparent)]
    Patterson(#[from] PattersonError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Io(#[from] IoError),
}

impl LabError {
    /// Name of the error type, for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Config(_) => "ConfigError",
            LabError::Geometry(_) => "GeometryError",
            LabError::Schottky(_) => "SchottkyError",
            LabError::Patterson(_) => "PattersonError",
            LabError::Measure(_) => "MeasureError",
            LabError::Analysis(_) => "AnalysisError",
            LabError::Io(_) => "IoError",
        }
    }
}

/// A named output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub bytes: Vec<u8>,
}

/// Key numbers and artifacts of one experiment.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: String,
    pub config_hash: String,
    pub version: String,
    pub seed: Option<u64>,
    pub numbers: BTreeMap<String, serde_json::Value>,
    pub pass: Option<bool>,
    #[serde(skip)]
    pub artifacts: Vec<Artifact>,
}

impl Report {
    fn new(name: &str, lab: &Lab) -> Self {
        Report {
            name: name.to_string(),
            config_hash: lab.hash.clone(),
            version: VERSION.to_string(),
            seed: lab.seed,
            numbers: BTreeMap::new(),
            pass: None,
            artifacts: Vec::new(),
        }
    }

    fn set<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.numbers.insert(key.to_string(), v);
    }

    fn attach(&mut self, file: &str, bytes: Vec<u8>) {
        self.artifacts.push(Artifact { file: file.to_string(), bytes });
    }

    /// Pretty JSON summary followed by a newline.
    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

/// Writes CSV rows of preformatted cells below one provenance line.
fn table(provenance: &[(&str, String)], header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = Vec::new();
    let line: Vec<String> = provenance.iter().map(|(k, v)| format!("{k}={v}")).collect();
    out.extend_from_slice(format!("# {}\n", line.join(" ")).as_bytes());
    let mut wr = csv::Writer::from_writer(&mut out);
    wr.write_record(header).expect("in-memory write");
    for r in rows {
        wr.write_record(r).expect("in-memory write");
    }
    wr.flush().expect("in-memory write");
    drop(wr);
    out
}

/// Parsed configuration plus lazily computed shared state.
pub struct Lab {
    pub config: ExperimentConfig,
    pub hash: String,
    pub seed: Option<u64>,
    group: Option<SchottkyGroup>,
    delta: OnceLock<DeltaEstimate>,
    ps: OnceLock<AtomicMeasure>,
    bms: OnceLock<(AtomicMeasure, f64)>,
    reference: OnceLock<BoxSpec>,
}

impl Lab {
    /// Builds the lab; `seed` overrides the configuration's seed.
    pub fn new(loaded: LoadedConfig, seed: Option<u64>) -> Result<Self, LabError> {
        let LoadedConfig { config, hash } = loaded;
        let group = if config.pairs.is_empty() { None } else { Some(config.group()?) };
        let seed = seed.or(config.seed);
        Ok(Lab {
            config,
            hash,
            seed,
            group,
            delta: OnceLock::new(),
            ps: OnceLock::new(),
            bms: OnceLock::new(),
            reference: OnceLock::new(),
        })
    }

    pub fn group(&self) -> Result<&SchottkyGroup, LabError> {
        self.group.as_ref().ok_or_else(|| ConfigError::Field { field: "pairs", msg: "this experiment needs a group".into() }.into())
    }

    /// The seed, required by sampling experiments.
    pub fn seed(&self) -> Result<u64, LabError> {
        self.seed.ok_or_else(|| ConfigError::Field { field: "seed", msg: "a seed is required (config key or --seed)".into() }.into())
    }

    /// δ̂: the configured value, or the series estimate at `delta_len`.
    pub fn delta_estimate(&self) -> Result<DeltaEstimate, LabError> {
        if let Some(d) = self.delta.get() {
            return Ok(*d);
        }
        let est = match self.config.delta {
            Some(delta) => DeltaEstimate { delta, uncertainty: 0.0 },
            None => estimate_delta_series(self.group()?, self.config.delta_len, 1e-9)?,
        };
        Ok(*self.delta.get_or_init(|| est))
    }

    pub fn delta(&self) -> Result<f64, LabError> {
        Ok(self.delta_estimate()?.delta)
    }

    /// Builds ν at exponent δ̂ + offset with the given truncation and band.
    pub fn build_ps(&self, max_len: usize, band: usize) -> Result<AtomicMeasure, LabError> {
        let s = self.delta()? + self.config.s_offset;
        let opts = PsOptions { band, max_atoms: self.config.max_atoms };
        let mut nu = build_ps(self.group()?, &H3Point::ORIGIN, s, max_len, self.seed.unwrap_or(0), opts)?;
        nu.provenance.config_hash = self.hash.clone();
        Ok(nu)
    }

    /// Unit-mass ν_o at the configured truncation.
    pub fn ps(&self) -> Result<&AtomicMeasure, LabError> {
        if let Some(m) = self.ps.get() {
            return Ok(m);
        }
        let nu = self.build_ps(self.config.max_len, 2)?;
        Ok(self.ps.get_or_init(|| nu))
    }

    /// ν_o rescaled so that the BMS measure has unit mass, with the factor.
    pub fn bms_ps(&self) -> Result<(&AtomicMeasure, f64), LabError> {
        if let Some((m, k)) = self.bms.get() {
            return Ok((m, *k));
        }
        let mut nu = self.ps()?.clone();
        let k = normalize_bms(self.group()?, &mut nu, self.delta()?, NORMALIZE_CELL)?;
        let (m, k) = self.bms.get_or_init(|| (nu, k));
        Ok((m, *k))
    }

    /// Box of half-width ρ around the frame at Hopf time 0 on the geodesic
    /// between the two coarse atoms whose geodesic passes closest to o.
    pub fn reference_box(&self) -> Result<&BoxSpec, LabError> {
        if let Some(b) = self.reference.get() {
            return Ok(b);
        }
        let group = self.group()?;
        let coarse = self.ps()?.coarsen(PAIR_CELL);
        let pts: Vec<Complex64> = coarse.finite_atoms().map(|a| a.0).collect();
        let mut best = (f64::INFINITY, 0, 0);
        for (i, a) in pts.iter().enumerate() {
            for (j, b) in pts.iter().enumerate() {
                if i != j {
                    let k = gromov_kernel(*a, *b);
                    if k < best.0 {
                        best = (k, i, j);
                    }
                }
            }
        }
        if !best.0.is_finite() {
            return Err(MeasureError::InvalidBox("ν has fewer than two distinct atoms".into()).into());
        }
        let x0 =
            FramePoint::from_hopf(group, BoundaryPoint::Finite(pts[best.1]), BoundaryPoint::Finite(pts[best.2]), 0.0, 0.0)?;
        let spec = BoxSpec::new(group, x0, self.config.rho)?;
        Ok(self.reference.get_or_init(|| spec))
    }
}

/// Coarsening cell for the BMS normalizer.
const NORMALIZE_CELL: f64 = 0.05;
/// Coarsening cell for choosing the reference box.
const PAIR_CELL: f64 = 0.05;

/// Runs a named experiment.
pub fn run(name: &str, lab: &Lab) -> Result<Report, LabError> {
    match name {
        "estimate-delta" => estimate_delta(lab),
        "ps-build" => ps_build(lab),
        "shadow" => shadow(lab),
        "phi0-check" => phi0_check(lab),
        "conditional" => conditional(lab),
        "flow" => flow(lab),
        "window" => window(lab),
        "hopf" => hopf(lab),
        "project" => project(lab),
        "energy" => energy(lab),
        "boxdim" => boxdim(lab),
        "mixing" => mixing(lab),
        "escape" => escape(lab),
        _ => Err(ConfigError::Parse(format!("unknown experiment {name:?}")).into()),
    }
}

/// Names accepted by [`run`].
pub const EXPERIMENTS: &[&str] = &[
    "estimate-delta",
    "ps-build",
    "shadow",
    "phi0-check",
    "conditional",
    "flow",
    "window",
    "hopf",
    "project",
    "energy",
    "boxdim",
    "mixing",
    "escape",
];

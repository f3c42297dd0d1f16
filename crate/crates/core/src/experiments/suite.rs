//! The acceptance suite: every criterion on the bundled configurations.

use std::time::Instant;

use serde::Serialize;

use super::{
    boxdim, conditional, energy, escape, estimate_delta, flow, geometry_suite, hopf, phi0_check, project, ps_build,
    reduction_suite, run, shadow, window, Lab, LabError, Report,
};
use crate::config::load_preset;
use crate::parallel::with_threads;

/// Outcome of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

impl Criterion {
    /// One line `[PASS] 3 title: detail`.
    pub fn line(&self) -> String {
        format!("[{}] {:>2} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.title, self.detail)
    }
}

/// Presets exercised by the criteria that run on three configurations.
pub const THREE: [&str; 3] = ["fuchsian", "thin", "octahedral"];

fn lab(name: &str) -> Result<Lab, LabError> {
    Lab::new(load_preset(name)?, None)
}

fn summary(r: &Report, keys: &[&str]) -> String {
    let parts: Vec<String> = keys.iter().filter_map(|k| r.numbers.get(*k).map(|v| format!("{k}={v}"))).collect();
    format!("{}: {}", r.name, parts.join(" "))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t0 = Instant::now();
    let v = f();
    (v, t0.elapsed().as_secs_f64())
}

/// Collects reports from several runs into one criterion.
fn combine(id: usize, title: &'static str, parts: Vec<Result<(bool, String), LabError>>, seconds: f64) -> Criterion {
    let mut pass = true;
    let mut details = Vec::new();
    for p in parts {
        match p {
            Ok((ok, d)) => {
                pass &= ok;
                details.push(d);
            }
            Err(e) => {
                pass = false;
                details.push(format!("{}: {e}", e.kind()));
            }
        }
    }
    Criterion { id, title, pass, detail: details.join("; "), seconds }
}

fn judged(r: Result<Report, LabError>, keys: &[&str]) -> Result<(bool, String), LabError> {
    let r = r?;
    Ok((r.pass.unwrap_or(false), summary(&r, keys)))
}

/// Runs criteria whose id is in `only` (all when empty), in order.
pub fn acceptance(only: &[usize]) -> Result<Vec<Criterion>, LabError> {
    let want = |id: usize| only.is_empty() || only.contains(&id);
    let labs: Vec<Lab> = THREE.iter().map(|n| lab(n)).collect::<Result<_, _>>()?;
    let octa = &labs[2];
    let mut out = Vec::new();

    if want(1) {
        let (r, secs) = timed(|| geometry_suite(octa));
        let mut c = combine(1, "geometry suite", vec![judged(r, &["cases", "max_error_isometry", "max_error_cocycle", "max_error_equivariance", "max_error_busemann_routes", "max_error_iwasawa", "max_error_box"])], secs);
        c.pass &= secs < 10.0;
        c.detail += &format!(" ({secs:.1} s, limit 10 s)");
        out.push(c);
    }
    if want(2) {
        let (r, secs) = timed(|| reduction_suite(octa));
        let mut c = combine(2, "reduction well-definedness", vec![judged(r, &["cases", "same_coset", "idempotent", "max_rep_rounding"])], secs);
        c.pass &= secs < 30.0;
        c.detail += &format!(" ({secs:.1} s, limit 30 s)");
        out.push(c);
    }
    if want(3) {
        let (parts, secs) = timed(|| labs.iter().map(|l| judged(estimate_delta(l), &["series_long", "orbit_long", "gap", "series_stable", "orbit_stable"])).collect());
        let mut c = combine(3, "critical exponent", parts, secs);
        c.pass &= secs < 120.0;
        c.detail += &format!(" ({secs:.1} s, limit 120 s)");
        out.push(c);
    }
    if want(4) {
        let (parts, secs) = timed(|| labs.iter().map(|l| judged(ps_build(l), &["residual_medians", "residual_monotone"])).collect());
        out.push(combine(4, "conformality", parts, secs));
    }
    if want(5) {
        let (parts, secs) = timed(|| labs.iter().map(|l| judged(shadow(l), &["delta", "slopes", "seed_spread"])).collect());
        out.push(combine(5, "shadow exponent", parts, secs));
    }
    if want(6) {
        let (parts, secs) = timed(|| {
            let mut parts = vec![lab("single_atom").and_then(|l| judged(phi0_check(&l), &["residual", "richardson"]))];
            parts.extend(labs.iter().map(|l| judged(phi0_check(l), &["max_residual", "median_richardson", "richardson_in_band"])));
            parts
        });
        out.push(combine(6, "eigenfunction", parts, secs));
    }
    if want(7) {
        let (parts, secs) = timed(|| labs.iter().map(|l| judged(energy(l), &["energy_below", "energy_above", "last_change_below", "growth_above"])).collect());
        out.push(combine(7, "energy dichotomy", parts, secs));
    }
    if want(8) {
        let (parts, secs) = timed(|| {
            let mut parts: Vec<_> = labs.iter().map(|l| judged(boxdim(l), &["delta", "atoms_dimension", "samples_dimension"])).collect();
            parts.push(judged(project(&labs[1]), &["delta", "median_dimension"]));
            parts.push(judged(project(octa), &["delta", "spread_fraction", "spread_fraction_refined"]));
            parts
        });
        out.push(combine(8, "dimension and projections", parts, secs));
    }
    if want(9) {
        let (r, secs) = timed(|| judged(conditional(octa), &["cases", "passed", "final_log_distance", "refinement_change"]));
        out.push(combine(9, "conditional convergence", vec![r], secs));
    }
    if want(10) {
        let (r, secs) = timed(|| judged(window(octa), &["starts", "good_fractions", "good_r", "closed_form_good", "closed_form_error"]));
        out.push(combine(10, "window theorem", vec![r], secs));
    }
    if want(11) {
        let (parts, secs) = timed(|| {
            vec![
                judged(flow(octa), &["starts", "growing_fraction"]),
                judged(escape(&labs[0]), &["control_slope", "generic_slopes", "quiet_fraction"]),
            ]
        });
        out.push(combine(11, "dichotomy diagnostics", parts, secs));
    }
    if want(12) {
        let (r, secs) = timed(|| judged(hopf(octa), &["target", "contracting", "near_target", "both_fraction"]));
        out.push(combine(12, "Hopf ratio trend", vec![r], secs));
    }
    if want(13) {
        let (r, secs) = timed(|| determinism(DETERMINISM_RUNS));
        out.push(combine(13, "determinism", vec![r], secs));
    }
    Ok(out)
}

/// (preset, experiment) pairs compared across thread counts.
pub const DETERMINISM_RUNS: &[(&str, &str)] = &[("thin", "ps-build"), ("octahedral", "mixing"), ("octahedral", "window")];

/// Output bytes (JSON summary and every artifact) of one run.
pub fn output_bytes(report: &Report) -> Vec<u8> {
    let mut bytes = report.summary_json().into_bytes();
    for a in &report.artifacts {
        bytes.extend_from_slice(a.file.as_bytes());
        bytes.extend_from_slice(&a.bytes);
    }
    bytes
}

/// Runs each pair with one and with three workers and compares output bytes.
pub fn determinism(runs: &[(&str, &str)]) -> Result<(bool, String), LabError> {
    let mut same = 0;
    let mut details = Vec::new();
    for (preset, name) in runs {
        let once = |threads: usize| with_threads(threads, || run(name, &lab(preset)?).map(|r| output_bytes(&r)));
        let (a, b) = (once(1)?, once(3)?);
        let eq = a == b;
        same += eq as usize;
        details.push(format!("{preset}/{name} {} bytes {}", a.len(), if eq { "identical" } else { "differ" }));
    }
    Ok((same == runs.len(), details.join(", ")))
}

//! Window statistics and Hopf ratios of unipotent orbit averages.

use serde::Serialize;

use crate::dynamics::{orbit_samples, orbit_series, TimeSeries};
use crate::error::AnalysisError;
use crate::measures::FramePoint;
use crate::schottky::SchottkyGroup;

/// ∫_{−rT}^{rT} ψ and ∫_{−T}^{T} ψ along x u_t, and whether x is good:
/// inner ≤ (1 − r) · outer.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WindowStat {
    pub inner: f64,
    pub outer: f64,
    pub good: bool,
}

/// Window statistic from a two-sided series covering [−T, T].
pub fn window_from_series(series: &TimeSeries, big_t: f64, r: f64) -> Result<WindowStat, AnalysisError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(AnalysisError::InvalidArgument(format!("r = {r} outside (0, 1)")));
    }
    let inner = series.integrate(-r * big_t, r * big_t);
    let outer = series.integrate(-big_t, big_t);
    Ok(WindowStat { inner, outer, good: inner <= (1.0 - r) * outer })
}

/// Window statistic of ψ along the orbit of x.
pub fn window_statistic<F>(group: &SchottkyGroup, x: &FramePoint, psi: F, big_t: f64, r: f64, dt: f64) -> Result<WindowStat, AnalysisError>
where
    F: Fn(&FramePoint) -> f64 + Sync,
{
    // align the grid with ±rT so both integrals use whole steps
    let steps = (big_t / dt).round().max(1.0);
    let series = orbit_series(group, x, psi, big_t, big_t / steps)?;
    window_from_series(&series, big_t, r)
}

/// ∫₀^T ψ₁(x u_t) dt / ∫₀^T ψ₂(x u_t) dt at each T of the grid; None where
/// the denominator vanishes.
pub fn hopf_ratio<F1, F2>(
    group: &SchottkyGroup,
    x: &FramePoint,
    psi1: F1,
    psi2: F2,
    t_grid: &[f64],
    dt: f64,
) -> Result<Vec<Option<f64>>, AnalysisError>
where
    F1: Fn(&FramePoint) -> f64 + Sync,
    F2: Fn(&FramePoint) -> f64 + Sync,
{
    let t_max = t_grid.iter().copied().fold(0.0, f64::max);
    if t_max <= 0.0 {
        return Err(AnalysisError::InvalidArgument("time grid must contain a positive time".into()));
    }
    let (times, pairs, step) = orbit_samples(group, x, |y| (psi1(y), psi2(y)), 0.0, t_max, dt)?;
    let first = TimeSeries { times: times.clone(), values: pairs.iter().map(|v| v.0).collect(), dt: step };
    let second = TimeSeries { times, values: pairs.iter().map(|v| v.1).collect(), dt: step };
    let ratios: Vec<Option<f64>> = t_grid
        .iter()
        .map(|&t| {
            let den = second.integrate(0.0, t);
            (den > 0.0).then(|| first.integrate(0.0, t) / den)
        })
        .collect();
    if ratios.iter().all(Option::is_none) {
        return Err(AnalysisError::DenominatorZero);
    }
    Ok(ratios)
}

/// Successive differences |r_{k+1} − r_k| of a ratio sequence are strictly shrinking.
pub fn contracting(ratios: &[f64]) -> bool {
    let d: Vec<f64> = ratios.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    d.windows(2).all(|w| w[1] < w[0])
}

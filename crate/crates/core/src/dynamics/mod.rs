//! Frame, unipotent and horospherical flows on X = Γ\G, orbit time series
//! and recurrence or escape diagnostics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SchottkyError;
use crate::hyperbolic::Mobius;
use crate::measures::{BoxSpec, FramePoint};
use crate::parallel::ordered_map;
use crate::patterson::least_squares_slope;
use crate::schottky::SchottkyGroup;


/// x a_s reduced into X.
pub fn flow_frame(group: &SchottkyGroup, x: &FramePoint, s: f64) -> Result<FramePoint, SchottkyError> {
    FramePoint::from_element(group, &x.rep.mul_raw(&Mobius::a(s)))
}

/// x u_t reduced into X.
pub fn flow_unipotent(group: &SchottkyGroup, x: &FramePoint, t: f64) -> Result<FramePoint, SchottkyError> {
    FramePoint::from_element(group, &x.rep.mul_raw(&Mobius::u(t)))
}

/// x n_z reduced into X.
pub fn translate_horospherical(group: &SchottkyGroup, x: &FramePoint, z: Complex64) -> Result<FramePoint, SchottkyError> {
    FramePoint::from_element(group, &x.rep.mul_raw(&Mobius::n(z)))
}

/// Samples of a function along a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub dt: f64,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Trapezoid integral over the samples with a ≤ t ≤ b.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        for k in 1..self.times.len() {
            let (t0, t1) = (self.times[k - 1], self.times[k]);
            if t0 >= a - 1e-12 && t1 <= b + 1e-12 {
                acc += 0.5 * (t1 - t0) * (self.values[k - 1] + self.values[k]);
            }
        }
        acc
    }

    /// Trapezoid integral over the whole series.
    pub fn total(&self) -> f64 {
        self.integrate(f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Uniform grid on [a, b] with step close to `dt` that hits both ends.
fn grid(a: f64, b: f64, dt: f64) -> Vec<f64> {
    let n = ((b - a) / dt).round().max(1.0) as usize;
    (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

/// Values of f(x u_t) on a grid over [a, b] with the grid and its step;
/// each point is reduced from x independently.
pub fn orbit_samples<T, F>(group: &SchottkyGroup, x: &FramePoint, f: F, a: f64, b: f64, dt: f64) -> Result<(Vec<f64>, Vec<T>, f64), SchottkyError>
where
    T: Send,
    F: Fn(&FramePoint) -> T + Sync,
{
    let times = grid(a, b, dt);
    let step = if times.len() > 1 { times[1] - times[0] } else { dt };
    let values = ordered_map(times.len(), |k| flow_unipotent(group, x, times[k]).map(|y| f(&y)));
    let values = values.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok((times, values, step))
}

/// ψ(x u_t) on a grid over [a, b].
pub fn orbit_series_on<F>(group: &SchottkyGroup, x: &FramePoint, psi: F, a: f64, b: f64, dt: f64) -> Result<TimeSeries, SchottkyError>
where
    F: Fn(&FramePoint) -> f64 + Sync,
{
    let (times, values, dt) = orbit_samples(group, x, psi, a, b, dt)?;
    Ok(TimeSeries { times, values, dt })
}

/// ψ(x u_t) for t ∈ [−T, T].
pub fn orbit_series<F>(group: &SchottkyGroup, x: &FramePoint, psi: F, big_t: f64, dt: f64) -> Result<TimeSeries, SchottkyError>
where
    F: Fn(&FramePoint) -> f64 + Sync,
{
    orbit_series_on(group, x, psi, -big_t, big_t, dt)
}

/// Distance from π(x) = (z, t) to the vertical plane over ℝ: asinh(|Im z| / t).
pub fn distance_to_plane(x: &FramePoint) -> f64 {
    let p = x.point();
    (p.z.im.abs() / p.t).asinh()
}

/// Least-squares slope of d(x u_t, plane) against log t over t ∈ [T/2, T].
pub fn escape_slope(group: &SchottkyGroup, x: &FramePoint, big_t: f64, dt: f64) -> Result<f64, SchottkyError> {
    let series = orbit_series_on(group, x, distance_to_plane, 0.5 * big_t, big_t, dt)?;
    let logs: Vec<f64> = series.times.iter().map(|t| t.ln()).collect();
    Ok(least_squares_slope(&logs, &series.values))
}

/// Time intervals [enter, exit] during which x u_t lies in E, t ∈ [0, T].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Visits {
    pub intervals: Vec<(f64, f64)>,
}

impl Visits {
    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    /// Total time spent in E up to `t`.
    pub fn total_until(&self, t: f64) -> f64 {
        self.intervals.iter().map(|&(a, b)| (b.min(t) - a).max(0.0)).sum()
    }

    /// Start of the last visit, if any.
    pub fn last_entry(&self) -> Option<f64> {
        self.intervals.last().map(|iv| iv.0)
    }
}

/// Visit intervals of the forward orbit to a box, sampled with step dt.
pub fn recurrence_times(group: &SchottkyGroup, x: &FramePoint, e: &BoxSpec, big_t: f64, dt: f64) -> Result<Visits, SchottkyError> {
    let series = orbit_series_on(group, x, |y| if e.contains(&y.rep) { 1.0 } else { 0.0 }, 0.0, big_t, dt)?;
    // each positive sample stands for the cell of width dt around it
    let half = 0.5 * series.dt;
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for (t, v) in series.times.iter().zip(&series.values) {
        if *v > 0.0 {
            let cell = ((t - half).max(0.0), (t + half).min(big_t));
            open = Some(match open {
                Some((a, _)) => (a, cell.1),
                None => cell,
            });
        } else if let Some(iv) = open.take() {
            intervals.push(iv);
        }
    }
    intervals.extend(open);
    Ok(Visits { intervals })
}

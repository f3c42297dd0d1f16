//! Poincaré series, orbit statistics and critical-exponent estimators.

use serde::Serialize;

use crate::error::PattersonError;
use crate::parallel::ordered_map;
use crate::schottky::LetterSet;

/// Σ e^{−s·d(o, γo)} over reduced words of length ≤ max_len, identity included.
pub fn poincare_partial<L: LetterSet>(group: &L, s: f64, max_len: usize) -> f64 {
    let parts = ordered_map(group.letter_count(), |k| {
        let mut acc = 0.0;
        group.visit_subtree(&[k as u8], max_len, |node| {
            acc += (-s * node.element.displacement()).exp();
            true
        });
        acc
    });
    1.0 + parts.iter().sum::<f64>()
}

/// Width of the displacement bins used by [`OrbitStats`].
pub const BIN_WIDTH: f64 = 1e-3;

/// Per-level displacement histograms: counts and sums of d(o, γo) per bin.
#[derive(Debug, Clone, Default)]
pub struct OrbitStats {
    /// `levels[k]` holds words of length k; level 0 is the identity.
    pub levels: Vec<LevelHistogram>,
}

#[derive(Debug, Clone, Default)]
pub struct LevelHistogram {
    pub count: Vec<u64>,
    pub sum: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub total: u64,
}

impl LevelHistogram {
    fn new() -> Self {
        LevelHistogram { count: Vec::new(), sum: Vec::new(), min: f64::INFINITY, max: 0.0, total: 0 }
    }

    fn add(&mut self, d: f64) {
        let b = (d / BIN_WIDTH) as usize;
        if b >= self.count.len() {
            self.count.resize(b + 1, 0);
            self.sum.resize(b + 1, 0.0);
        }
        self.count[b] += 1;
        self.sum[b] += d;
        self.min = self.min.min(d);
        self.max = self.max.max(d);
        self.total += 1;
    }

    fn merge(&mut self, other: &LevelHistogram) {
        if other.count.len() > self.count.len() {
            self.count.resize(other.count.len(), 0);
            self.sum.resize(other.count.len(), 0.0);
        }
        for (i, (&c, &s)) in other.count.iter().zip(other.sum.iter()).enumerate() {
            self.count[i] += c;
            self.sum[i] += s;
        }
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
        self.total += other.total;
    }

    /// Σ e^{−s d} using the bin means.
    pub fn exp_sum(&self, s: f64) -> f64 {
        self.count
            .iter()
            .zip(self.sum.iter())
            .filter(|(&c, _)| c > 0)
            .map(|(&c, &sum)| c as f64 * (-s * sum / c as f64).exp())
            .sum()
    }

    /// Number of entries with displacement ≤ r (bin resolution).
    pub fn count_within(&self, r: f64) -> u64 {
        let b = ((r / BIN_WIDTH) as usize).min(self.count.len());
        self.count[..b].iter().sum()
    }
}

impl OrbitStats {
    /// Streams every reduced word of length ≤ max_len into per-level histograms.
    pub fn collect<L: LetterSet>(group: &L, max_len: usize) -> Self {
        let n = group.letter_count();
        // fixed fan-out over two-letter prefixes
        let mut prefixes = Vec::new();
        for a in 0..n {
            if max_len < 2 {
                prefixes.push(vec![a as u8]);
                continue;
            }
            for b in 0..n {
                if b != group.inverse_letter(a) {
                    prefixes.push(vec![a as u8, b as u8]);
                }
            }
        }
        let parts = ordered_map(prefixes.len(), |i| {
            let mut levels = vec![LevelHistogram::new(); max_len + 1];
            group.visit_subtree(&prefixes[i], max_len, |node| {
                levels[node.len()].add(node.element.displacement());
                true
            });
            levels
        });
        let mut levels = vec![LevelHistogram::new(); max_len + 1];
        levels[0].add(0.0);
        if max_len >= 2 {
            for a in 0..n {
                levels[1].add(group.letter(a).displacement());
            }
        }
        for p in &parts {
            for (k, h) in p.iter().enumerate() {
                levels[k].merge(h);
            }
        }
        OrbitStats { levels }
    }

    pub fn max_len(&self) -> usize {
        self.levels.len() - 1
    }

    /// Σ over levels ≤ max_len of e^{−s d}.
    pub fn partial_sum(&self, s: f64, max_len: usize) -> f64 {
        self.levels[..=max_len].iter().map(|h| h.exp_sum(s)).sum()
    }

    /// Orbit counting function N(R) from all enumerated levels.
    pub fn count_within(&self, r: f64) -> u64 {
        self.levels.iter().map(|h| h.count_within(r)).sum()
    }
}

/// A critical-exponent estimate with an error bar.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaEstimate {
    pub delta: f64,
    pub uncertainty: f64,
}

const RATIO_WINDOW: usize = 4;

fn mean_log_ratio(stats: &OrbitStats, s: f64, top: usize) -> f64 {
    let lo = top + 1 - RATIO_WINDOW;
    let mut acc = 0.0;
    for k in lo..=top {
        acc += (stats.levels[k].exp_sum(s) / stats.levels[k - 1].exp_sum(s)).ln();
    }
    acc / RATIO_WINDOW as f64
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64, PattersonError> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(PattersonError::NonBracketed { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ratio-test estimator: the exponent s at which the geometric mean of the
/// last four level ratios S_k(s)/S_{k−1}(s) equals one.
pub fn estimate_delta_series_from(stats: &OrbitStats, tol: f64) -> Result<DeltaEstimate, PattersonError> {
    let top = stats.max_len();
    if top < RATIO_WINDOW + 1 {
        return Err(PattersonError::InsufficientOrbit(top));
    }
    let (lo, hi) = (1e-3, 2.0);
    let d_top = bisect(|s| mean_log_ratio(stats, s, top), lo, hi, tol)?;
    let d_prev = bisect(|s| mean_log_ratio(stats, s, top - 1), lo, hi, tol)?;
    Ok(DeltaEstimate { delta: d_top, uncertainty: (d_top - d_prev).abs() + tol })
}

/// Ratio-test estimator from scratch.
pub fn estimate_delta_series<L: LetterSet>(group: &L, max_len: usize, tol: f64) -> Result<DeltaEstimate, PattersonError> {
    estimate_delta_series_from(&OrbitStats::collect(group, max_len), tol)
}

/// Least-squares slope of log N(R) against R on the range where every
/// orbit point with d ≤ R has been enumerated.
pub fn estimate_delta_orbit_from(stats: &OrbitStats) -> Result<DeltaEstimate, PattersonError> {
    let top = stats.max_len();
    let r_hi = stats.levels[top].min;
    let r_lo = 0.5 * r_hi;
    let n_hi = stats.count_within(r_hi);
    if n_hi < 100 || !(r_hi > 0.0) {
        return Err(PattersonError::InsufficientOrbit(n_hi as usize));
    }
    let fit = |a: f64, b: f64| {
        let m = 400;
        let mut xs = Vec::with_capacity(m);
        let mut ys = Vec::with_capacity(m);
        for i in 0..m {
            let r = a + (b - a) * (i as f64 + 0.5) / m as f64;
            xs.push(r);
            ys.push((stats.count_within(r).max(1) as f64).ln());
        }
        least_squares_slope(&xs, &ys)
    };
    let slope = fit(r_lo, r_hi);
    let mid = 0.5 * (r_lo + r_hi);
    let spread = (fit(r_lo, mid) - fit(mid, r_hi)).abs();
    Ok(DeltaEstimate { delta: slope, uncertainty: 0.5 * spread })
}

/// Orbit-growth estimator from scratch.
pub fn estimate_delta_orbit<L: LetterSet>(group: &L, max_len: usize) -> Result<DeltaEstimate, PattersonError> {
    estimate_delta_orbit_from(&OrbitStats::collect(group, max_len))
}

/// Ordinary least-squares slope.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}


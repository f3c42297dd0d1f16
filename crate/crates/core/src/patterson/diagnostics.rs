//! Conformality, shadow-lemma and non-focusing diagnostics for atomic measures.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{least_squares_slope, AtomicMeasure};
use crate::error::PattersonError;
use crate::hyperbolic::{busemann, hyp_dist, BoundaryPoint, H3Point};
use crate::parallel::ordered_map;
use crate::schottky::{count_reduced_words, LetterSet, SchottkyGroup};

/// Median and 90th percentile of a residual sample.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualStats {
    pub median: f64,
    pub p90: f64,
    pub count: usize,
}

/// Quantile by nearest rank on a sorted copy.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let idx = ((q * (v.len() - 1) as f64).round() as usize).min(v.len() - 1);
    v[idx]
}

/// Words used for residual statistics: all band words up to this many, else a seeded sample.
const RESIDUAL_WORDS: usize = 20_000;

/// Log-derivative residual of one atom: s · |[d(y,p) − d(x,p)] − β_ξ(y, x)|.
pub fn atom_residual(x: &H3Point, y: &H3Point, p: &H3Point, xi: BoundaryPoint, s: f64) -> Result<f64, PattersonError> {
    let disc = hyp_dist(y, p) - hyp_dist(x, p);
    Ok(s * (disc - busemann(xi, y, x)?).abs())
}

/// Compares the Radon–Nikodym derivative dν_y/dν_x of atomic measures at
/// exponent `s` with the conformal density e^{−s β_ξ(y,x)}, over the atoms
/// carried by words of length max_len − 2 ..= max_len.
pub fn conformal_residual(
    group: &SchottkyGroup,
    x: &H3Point,
    y: &H3Point,
    s: f64,
    max_len: usize,
) -> Result<ResidualStats, PattersonError> {
    let lo = max_len.saturating_sub(2).max(1);
    let n = group.letter_count();
    let total = count_reduced_words(n, max_len) - count_reduced_words(n, lo - 1);
    let mut words: Vec<Vec<u8>> = Vec::new();
    if total <= RESIDUAL_WORDS as u128 {
        group.visit_words(max_len, |node| {
            if node.len() >= lo {
                words.push(node.letters.to_vec());
            }
            true
        });
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let span = (max_len - lo + 1) as f64;
        for i in 0..RESIDUAL_WORDS {
            let len = lo + ((i as f64 / RESIDUAL_WORDS as f64) * span) as usize;
            words.push(group.random_word(&mut rng, len.min(max_len)));
        }
    }
    let res: Vec<Result<f64, PattersonError>> = ordered_map(words.len(), |i| {
        let w = &words[i];
        let p = group.element(w).apply_origin();
        let xi = BoundaryPoint::Finite(group.nested_disk(w).center);
        atom_residual(x, y, &p, xi, s)
    });
    let vals = res.into_iter().collect::<Result<Vec<f64>, _>>()?;
    Ok(ResidualStats { median: quantile(&vals, 0.5), p90: quantile(&vals, 0.9), count: vals.len() })
}

/// Outcome of a shadow-lemma fit.
#[derive(Debug, Clone, Serialize)]
pub struct ShadowFit {
    /// Mean over sample points of the log–log slope of ν(B(ξ, r)) against r.
    pub slope: f64,
    pub per_point: Vec<f64>,
    /// Standard deviation of the per-point slopes divided by their mean.
    pub spread: f64,
}

/// Ball masses ν(B(ξ, r)) for every radius (radii ascending).
pub fn ball_masses(mu: &AtomicMeasure, xi: Complex64, radii: &[f64]) -> Vec<f64> {
    let r2: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let mut bins = vec![0.0; radii.len() + 1];
    for (z, w) in mu.finite_atoms() {
        let d2 = (z - xi).norm_sqr();
        bins[r2.partition_point(|&r| r <= d2)] += w;
    }
    let mut acc = 0.0;
    bins[..radii.len()]
        .iter()
        .map(|b| {
            acc += b;
            acc
        })
        .collect()
}

/// Fits log ν(B(ξ, r)) ≈ δ log r + c at each sample point over a common radius grid.
pub fn shadow_exponent(mu: &AtomicMeasure, xi_samples: &[Complex64], radii: &[f64]) -> Result<ShadowFit, PattersonError> {
    let samples: Vec<(Complex64, Vec<f64>)> = xi_samples.iter().map(|&x| (x, radii.to_vec())).collect();
    shadow_exponent_local(mu, &samples)
}

/// Same fit with a radius grid per sample point.
pub fn shadow_exponent_local(mu: &AtomicMeasure, samples: &[(Complex64, Vec<f64>)]) -> Result<ShadowFit, PattersonError> {
    if samples.is_empty() {
        return Err(PattersonError::InvalidArgument("no sample points".into()));
    }
    for (_, radii) in samples {
        if radii.len() < 2 || radii.windows(2).any(|w| !(w[0] < w[1])) || !(radii[0] > 0.0) {
            return Err(PattersonError::InvalidArgument("need ≥ 2 increasing positive radii".into()));
        }
    }
    let masses = ordered_map(samples.len(), |i| ball_masses(mu, samples[i].0, &samples[i].1));
    let mut per_point = Vec::with_capacity(samples.len());
    for (i, m) in masses.iter().enumerate() {
        let radii = &samples[i].1;
        if !(m[0] > 0.0) {
            return Err(PattersonError::EmptyBall { index: i, radius: radii[0] });
        }
        let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let ys: Vec<f64> = m.iter().map(|v| v.ln()).collect();
        per_point.push(least_squares_slope(&xs, &ys));
    }
    let n = per_point.len() as f64;
    let mean = per_point.iter().sum::<f64>() / n;
    let var = per_point.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(ShadowFit { slope: mean, spread: var.sqrt() / mean.abs(), per_point })
}

/// Fraction of ν(B(ξ, r)) lying in the double cone |Im(η − ξ)| ≤ |Re(η − ξ)| / d.
pub fn nonfocusing_fraction(mu: &AtomicMeasure, xi: Complex64, d: f64, r: f64) -> Result<f64, PattersonError> {
    let r2 = r * r;
    let mut ball = 0.0;
    let mut cone = 0.0;
    for (z, w) in mu.finite_atoms() {
        let v = z - xi;
        if v.norm_sqr() < r2 {
            ball += w;
            if v.im.abs() * d <= v.re.abs() {
                cone += w;
            }
        }
    }
    if !(ball > 0.0) {
        return Err(PattersonError::EmptyBall { index: 0, radius: r });
    }
    Ok(cone / ball)
}

/// Log-spaced radii between `lo` and `hi`.
pub fn log_radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1).max(1) as f64)).collect()
}

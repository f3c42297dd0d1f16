//! Projections p_θ of planar measures onto lines and their histograms.

use serde::Serialize;

use crate::patterson::AtomicMeasure;

/// Push-forward of a planar atomic measure under p_θ(z) = Im(e^{−iθ} z),
/// the coordinate orthogonal to the direction e^{iθ}.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectedMeasure {
    pub theta: f64,
    pub atoms: Vec<(f64, f64)>,
}

impl ProjectedMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.0).collect()
    }
}

/// p_θ push-forward of the finite atoms of μ.
pub fn project(mu: &AtomicMeasure, theta: f64) -> ProjectedMeasure {
    let (s, c) = theta.sin_cos();
    let atoms = mu.finite_atoms().map(|(z, w)| (c * z.im - s * z.re, w)).collect();
    ProjectedMeasure { theta, atoms }
}

/// Mass histogram of a projected measure on equal bins spanning its support.
#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub width: f64,
    pub mass: Vec<f64>,
}

impl Histogram {
    /// Bin mass divided by bin width.
    pub fn density(&self) -> Vec<f64> {
        self.mass.iter().map(|m| m / self.width).collect()
    }

    /// Fraction of bins carrying positive mass.
    pub fn occupancy(&self) -> f64 {
        self.mass.iter().filter(|&&m| m > 0.0).count() as f64 / self.mass.len() as f64
    }

    /// Σ density · width.
    pub fn integral(&self) -> f64 {
        self.density().iter().map(|d| d * self.width).sum()
    }
}

/// Histogram of p_θ μ with `bins` equal bins; a degenerate support gets one
/// bin of unit width holding all the mass.
pub fn projected_density(mu: &AtomicMeasure, theta: f64, bins: usize) -> Histogram {
    histogram(&project(mu, theta), bins)
}

/// Histogram of an already projected measure.
pub fn histogram(p: &ProjectedMeasure, bins: usize) -> Histogram {
    let bins = bins.max(1);
    let lo = p.atoms.iter().map(|a| a.0).fold(f64::INFINITY, f64::min);
    let hi = p.atoms.iter().map(|a| a.0).fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let mut mass = vec![0.0; bins];
    if !(span > 1e-12 * scale) {
        mass[0] = p.total_mass();
        return Histogram { lo, width: 1.0, mass };
    }
    let width = span / bins as f64;
    for &(x, w) in &p.atoms {
        let k = (((x - lo) / width) as usize).min(bins - 1);
        mass[k] += w;
    }
    Histogram { lo, width, mass }
}

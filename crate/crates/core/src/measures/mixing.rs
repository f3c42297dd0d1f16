//! Monte Carlo estimates of BR correlations between boxes under the frame flow.

use serde::Serialize;

use super::sampling::sample_br_box;
use super::BoxSpec;
use crate::error::MeasureError;
use crate::hyperbolic::Mobius;
use crate::patterson::AtomicMeasure;
use crate::schottky::SchottkyGroup;

/// A weighted Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Mean and standard error of Σ wᵢ fᵢ for i.i.d. terms.
    pub fn from_terms(terms: &[f64]) -> Self {
        let n = terms.len() as f64;
        let value: f64 = terms.iter().sum();
        let mean = value / n;
        let var = terms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        Estimate { value, std_error: (var * n).sqrt() }
    }
}

/// ∫ χ_{E₁}(g a_{−s}) χ_{E₂}(g) dm^BR(g), sampling g from m^BR on E₂.
pub fn mixing_correlation(
    group: &SchottkyGroup,
    e1: &BoxSpec,
    e2: &BoxSpec,
    nu: &AtomicMeasure,
    delta: f64,
    s: f64,
    count: usize,
    seed: u64,
) -> Result<Estimate, MeasureError> {
    let samples = sample_br_box(group, e2, nu, delta, count, seed)?;
    let shift = Mobius::a(-s);
    let mut terms = vec![0.0; count];
    for (slot, smp) in terms.iter_mut().zip(&samples) {
        let rep = group.reduce_rep(&smp.frame.rep.mul_raw(&shift))?;
        if e1.contains(&rep) {
            *slot = smp.weight;
        }
    }
    Ok(Estimate::from_terms(&terms))
}

/// e^{(2−δ)s} ∫ χ_{E₁}(g) χ_{E₂}(g a_s) dm^BR(g), sampling g from m^BR on E₁.
pub fn reversed_correlation(
    group: &SchottkyGroup,
    e1: &BoxSpec,
    e2: &BoxSpec,
    nu: &AtomicMeasure,
    delta: f64,
    s: f64,
    count: usize,
    seed: u64,
) -> Result<Estimate, MeasureError> {
    let samples = sample_br_box(group, e1, nu, delta, count, seed)?;
    let shift = Mobius::a(s);
    let factor = ((2.0 - delta) * s).exp();
    let mut terms = vec![0.0; count];
    for (slot, smp) in terms.iter_mut().zip(&samples) {
        let rep = group.reduce_rep(&smp.frame.rep.mul_raw(&shift))?;
        if e2.contains(&rep) {
            *slot = factor * smp.weight;
        }
    }
    Ok(Estimate::from_terms(&terms))
}

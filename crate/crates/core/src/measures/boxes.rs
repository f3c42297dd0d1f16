//! Flow boxes E = x₀B_ρ with B_ρ = {n⁻_w a_s n_z m_θ : |w|, |s|, |z| < ρ}.

use num_complex::Complex64;
use serde::Serialize;

use super::FramePoint;
use crate::error::MeasureError;
use crate::hyperbolic::{cosh_dist, decompose_box, BoundaryPoint, BoxCoords, H3Point, Mobius};
use crate::patterson::AtomicMeasure;
use crate::schottky::{enumerate_words, SchottkyGroup};

/// Words up to this length are checked for injectivity and used as translates.
pub const INJECTIVITY_WORDS: usize = 6;
const TRANSLATE_WORDS: usize = 3;

/// Hyperbolic radius of B_ρ · o around o.
pub fn box_reach(rho: f64) -> f64 {
    4.0 * (0.5 * rho).asinh() + rho
}

/// A box in X with the lifts needed to test membership of canonical frames.
#[derive(Debug, Clone)]
pub struct BoxSpec {
    pub center: FramePoint,
    pub rho: f64,
    translates: Vec<(Mobius, Mobius, H3Point)>,
    cosh_reach: f64,
}

impl BoxSpec {
    /// Checks that Γ-translates of the box are disjoint (up to words of
    /// length [`INJECTIVITY_WORDS`]) and caches the lifts that can meet the
    /// fundamental domain.
    pub fn new(group: &SchottkyGroup, center: FramePoint, rho: f64) -> Result<Self, MeasureError> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(MeasureError::InvalidBox(format!("rho {rho} outside (0, 1)")));
        }
        let reach = box_reach(rho);
        let c = center.point();
        for w in enumerate_words(group, INJECTIVITY_WORDS).iter().skip(1) {
            let d = crate::hyperbolic::hyp_dist(&c, &w.element.apply_h3(&c));
            if d <= 2.0 * reach {
                return Err(MeasureError::InvalidBox(format!(
                    "word {:?} moves the centre by {d:.4} ≤ 2·reach {:.4}",
                    w.letters,
                    2.0 * reach
                )));
            }
        }
        let mut translates = Vec::new();
        for w in enumerate_words(group, TRANSLATE_WORDS) {
            let t = w.element * center.rep;
            let p = t.apply_origin();
            // keep lifts whose reach ball can meet the fundamental domain
            if group.disks().iter().all(|d| d.signed_distance(&p) > -reach) {
                translates.push((t, t.inverse(), p));
            }
        }
        Ok(BoxSpec { center, rho, translates, cosh_reach: reach.cosh() })
    }

    /// Box coordinates of a canonical frame relative to the lift containing it.
    pub fn locate(&self, rep: &Mobius) -> Option<BoxCoords> {
        let p = rep.apply_origin();
        for (_, inv, q) in &self.translates {
            if cosh_dist(&p, q) >= self.cosh_reach {
                continue;
            }
            if let Ok(bc) = decompose_box(&inv.mul_raw(rep)) {
                if bc.radius() < self.rho {
                    return Some(bc);
                }
            }
        }
        None
    }

    /// Indicator of the box on canonical frames.
    pub fn contains(&self, rep: &Mobius) -> bool {
        self.locate(rep).is_some()
    }

    /// Number of lifts kept for membership tests.
    pub fn translate_count(&self) -> usize {
        self.translates.len()
    }

    /// Lifts γ x₀ kept for membership tests.
    pub fn lifts(&self) -> impl Iterator<Item = &Mobius> {
        self.translates.iter().map(|(t, _, _)| t)
    }

    /// Distance from the box endpoints to the nearest atom of ν.
    pub fn endpoint_gaps(&self, nu: &AtomicMeasure) -> (f64, f64) {
        let (p, m) = self.center.endpoints();
        let gap = |x: BoundaryPoint| {
            nu.atoms.iter().map(|a| a.xi.chordal(x)).fold(f64::INFINITY, f64::min)
        };
        (gap(p), gap(m))
    }
}

/// Per-atom data for BR mass and sampling: with q = x₀⁻¹ k_ξ, the atom
/// contributes when |q(0)| < ρ, and then s ranges over 2 log|q₂₂| ± ρ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AtomWindow {
    pub index: usize,
    pub weight: f64,
    pub s_mid: f64,
    /// q₂₁ / q₂₂, which fixes the centre of the admissible z-disk.
    pub ratio: Complex64,
}

/// Atoms whose backward direction enters the box, with their windows.
pub fn atom_windows(spec: &BoxSpec, nu: &AtomicMeasure) -> Vec<AtomWindow> {
    let inv = spec.center.rep.inverse();
    let mut out = Vec::new();
    for (index, atom) in nu.atoms.iter().enumerate() {
        let q = inv.mul_raw(&Mobius::k_to(atom.xi));
        if q.d.norm() == 0.0 {
            continue;
        }
        if (q.b / q.d).norm() < spec.rho {
            out.push(AtomWindow { index, weight: atom.weight, s_mid: 2.0 * q.d.norm().ln(), ratio: q.c / q.d });
        }
    }
    out
}

/// Closed-form m^BR(E) = Σ w · πρ² · e^{−δ s_mid} · 2 sinh(δρ)/δ over admissible atoms.
pub fn br_box_mass(spec: &BoxSpec, nu: &AtomicMeasure, delta: f64) -> f64 {
    let rho = spec.rho;
    let factor = std::f64::consts::PI * rho * rho * 2.0 * (delta * rho).sinh() / delta;
    atom_windows(spec, nu).iter().map(|a| a.weight * (-delta * a.s_mid).exp() * factor).sum()
}

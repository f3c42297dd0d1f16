//! Iwasawa (KAN) and box (N⁻AMN) coordinates on PSL₂(ℂ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BoundaryPoint, Mobius};
use crate::error::GeometryError;

/// g = k · a_s · n_z with k in SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iwasawa {
    pub k: Mobius,
    pub s: f64,
    pub z: Complex64,
}

/// Coordinates of g = n⁻_w · a_s · n_z · m_θ, θ ∈ (−π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxCoords {
    pub w: Complex64,
    pub s: f64,
    pub z: Complex64,
    pub theta: f64,
}

impl BoxCoords {
    pub const ZERO: BoxCoords =
        BoxCoords { w: Complex64::new(0.0, 0.0), s: 0.0, z: Complex64::new(0.0, 0.0), theta: 0.0 };

    /// Rebuilds the group element.
    pub fn compose(&self) -> Mobius {
        Mobius::n_minus(self.w) * Mobius::a(self.s) * Mobius::n(self.z) * Mobius::m(self.theta)
    }

    /// Sup-type size max(|w|, |s|, |z|) used for box membership.
    pub fn radius(&self) -> f64 {
        self.w.norm().max(self.s.abs()).max(self.z.norm())
    }
}

const RECOMPOSE_TOL: f64 = 1e-8;

/// KAN decomposition; closed form from gᴴg = (a_s n_z)ᴴ(a_s n_z).
pub fn iwasawa(g: &Mobius) -> Result<Iwasawa, GeometryError> {
    let col2 = g.b.norm_sqr() + g.d.norm_sqr();
    if !(col2 > 0.0) || !col2.is_finite() {
        return Err(GeometryError::SingularMatrix(col2));
    }
    let s = -col2.ln();
    let z = (g.b.conj() * g.a + g.d.conj() * g.c) / col2;
    let an = Mobius::a(s) * Mobius::n(z);
    let k = g * &an.inverse();
    let err = (k * an).distance_mod_sign(g) / g.frobenius_sq().sqrt();
    if !(err < RECOMPOSE_TOL) {
        return Err(GeometryError::IwasawaNonConvergence(err));
    }
    Ok(Iwasawa { k, s, z })
}

/// Smallest |d| for which the box chart is used.
pub const CHART_EPS: f64 = 1e-150;

/// N⁻AMN coordinates in closed form.
///
/// With g = n⁻_w a_s n_z m_θ one has d = e^{−s/2}e^{−iθ}, b = w d and
/// c = z e^{2iθ} d, which inverts directly whenever d ≠ 0.
pub fn decompose_box(g: &Mobius) -> Result<BoxCoords, GeometryError> {
    let dn = g.d.norm();
    if !(dn > CHART_EPS) || !g.is_finite() {
        return Err(GeometryError::OutsideChart(dn));
    }
    let s = -2.0 * dn.ln();
    let mut theta = -g.d.arg();
    if theta <= -std::f64::consts::FRAC_PI_2 {
        theta += std::f64::consts::PI;
    } else if theta > std::f64::consts::FRAC_PI_2 {
        theta -= std::f64::consts::PI;
    }
    let w = g.b / g.d;
    let z = g.c / g.d * Complex64::from_polar(1.0, -2.0 * theta);
    Ok(BoxCoords { w, s, z, theta })
}

/// Forward and backward endpoints (g(∞), g(0)) of the frame g.
pub fn frame_endpoints(g: &Mobius) -> (BoundaryPoint, BoundaryPoint) {
    (g.apply_boundary(BoundaryPoint::Infinity), g.apply_boundary(BoundaryPoint::Finite(Complex64::new(0.0, 0.0))))
}

//! Measures on horospherical leaves xN and the conditional measures λ_{E,x,s}.

use num_complex::Complex64;
use serde::Serialize;

use super::boxes::box_reach;
use super::{BoxSpec, FramePoint};
use crate::error::MeasureError;
use crate::hyperbolic::{busemann_closed, frame_endpoints, BoundaryPoint, H3Point, Mobius};
use crate::patterson::AtomicMeasure;
use crate::schottky::{LetterSet, SchottkyGroup};

/// e^{δ β_{v⁺}(o, π(v))} with v = y n_z.
pub fn leaf_ps_weight(y: &Mobius, z: Complex64, delta: f64) -> f64 {
    let v = y.mul_raw(&Mobius::n(z));
    let (plus, _) = frame_endpoints(&v);
    (delta * busemann_closed(plus, &H3Point::ORIGIN, &v.apply_origin())).exp()
}

/// e^{2 β_{v⁺}(o, π(v))} with v = y n_z.
pub fn leaf_leb_weight(y: &Mobius, z: Complex64) -> f64 {
    leaf_ps_weight(y, z, 2.0)
}

/// Density of μ^Leb_y against dz: e^{2β} times the Jacobian of z ↦ v⁺ for
/// m_o = dA/(1+|ξ|²)². It equals one identically.
pub fn leaf_leb_density(y: &Mobius, z: Complex64) -> f64 {
    // v⁺ = y(1/z); |d v⁺/dz| = |y'(1/z)| / |z|²
    let w = z.inv();
    let plus = y.apply(w);
    let jac = y.derivative_norm(w) / z.norm_sqr();
    let conformal = (1.0 + plus.norm_sqr()).powi(-2);
    leaf_leb_weight(y, z) * jac * jac * conformal
}

/// A smooth bump exp(1 − 1/(1 − |z−c|²/r²)) supported on |z − c| < r.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LeafBump {
    pub center: Complex64,
    pub radius: f64,
}

impl LeafBump {
    #[inline]
    pub fn eval(&self, z: Complex64) -> f64 {
        let u = (z - self.center).norm_sqr() / (self.radius * self.radius);
        if u >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - u)).exp()
        }
    }

    /// Largest |z| in the support.
    pub fn reach(&self) -> f64 {
        self.center.norm() + self.radius
    }
}

/// μ^PS_x(ψ) = Σ ψ(z_ξ) e^{δ β_ξ(o, π(x n_{z_ξ}))} w_ξ, where x n_{z_ξ}(∞) = ξ.
pub fn leaf_ps_measure(nu: &AtomicMeasure, delta: f64, x: &FramePoint, psi: &LeafBump) -> f64 {
    let inv = x.rep.inverse();
    let mut acc = 0.0;
    for a in &nu.atoms {
        // x n_z(∞) = x(1/z) = ξ  ⇔  z = 1 / x⁻¹(ξ)
        let z = match inv.apply_boundary(a.xi) {
            BoundaryPoint::Infinity => Complex64::new(0.0, 0.0),
            BoundaryPoint::Finite(w) if w.norm() > 0.0 => w.inv(),
            BoundaryPoint::Finite(_) => continue,
        };
        let val = psi.eval(z);
        if val > 0.0 {
            acc += a.weight * val * leaf_ps_weight(&x.rep, z, delta);
        }
    }
    acc
}

/// Word length cap for lift enumeration.
const MAX_DEPTH: usize = 64;

/// Result of a λ_{E,x,s} evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConditionalValue {
    pub value: f64,
    /// Number of lifts of E met by x N a_s.
    pub hits: usize,
    /// Raw ∫ ψ(z) χ_E(x n_z a_s) dz.
    pub integral: f64,
}

/// Polar quadrature of ψ over a disk: `rings` × 2·`rings` midpoint nodes.
fn disk_quadrature(psi: &LeafBump, center: Complex64, radius: f64, rings: usize) -> f64 {
    let spokes = 2 * rings;
    let mut acc = 0.0;
    for i in 0..rings {
        let r0 = radius * i as f64 / rings as f64;
        let r1 = radius * (i + 1) as f64 / rings as f64;
        let rm = 0.5 * (r0 + r1);
        let area = std::f64::consts::PI * (r1 * r1 - r0 * r0) / spokes as f64;
        for j in 0..spokes {
            let ang = std::f64::consts::TAU * (j as f64 + 0.5) / spokes as f64;
            acc += area * psi.eval(center + Complex64::from_polar(rm, ang));
        }
    }
    acc
}

/// λ_{E,x,s}(ψ) = e^{(2−δ)s} / m^BR(E) · ∫ ψ(z) χ_E(x n_z a_s) dz.
///
/// For each lift η x₀ of E, with q = (η x₀)⁻¹ x, the frame x n_z a_s lies in
/// η x₀ B_ρ exactly when |q₁₂/q₂₂| < ρ, |s − 2 log|q₂₂|| < ρ and z lies in the
/// disk of radius ρe^{−s} about −q₂₁/q₂₂. Lifts are enumerated over the word
/// tree, pruning subtrees whose hemisphere is too far from o.
pub fn conditional_leaf(
    group: &SchottkyGroup,
    spec: &BoxSpec,
    br_mass: f64,
    delta: f64,
    x: &FramePoint,
    s: f64,
    psi: &LeafBump,
    rings: usize,
) -> Result<ConditionalValue, MeasureError> {
    if !(br_mass > 0.0) {
        return Err(MeasureError::InvalidBox("box has zero BR mass".into()));
    }
    let rho = spec.rho;
    let x0 = spec.center.rep;
    let xr = x.rep;
    let o = H3Point::ORIGIN;
    let bound = crate::hyperbolic::hyp_dist(&o, &xr.apply_origin())
        + s
        + (1.0 + psi.reach().powi(2)).ln()
        + box_reach(rho)
        + crate::hyperbolic::hyp_dist(&o, &x0.apply_origin())
        + 1.0;
    let radius = rho * (-s).exp();
    let mut integral = 0.0;
    let mut hits = 0usize;
    let mut test = |eta: &Mobius| {
        let q = eta.mul_raw(&x0).inverse().mul_raw(&xr);
        if q.d.norm() == 0.0 {
            return;
        }
        if (q.b / q.d).norm() >= rho || (s - 2.0 * q.d.norm().ln()).abs() >= rho {
            return;
        }
        let center = -q.c / q.d;
        if (center - psi.center).norm() >= psi.radius + radius {
            return;
        }
        let part = disk_quadrature(psi, center, radius, rings);
        if part > 0.0 {
            integral += part;
            hits += 1;
        }
    };
    test(&Mobius::IDENTITY);
    group.visit_words(MAX_DEPTH, |node| {
        let disk = group.nested_disk_from(&node.prefix, node.last());
        // signed distance from o to the hemisphere over the nested disk
        let gap = ((disk.center.norm_sqr() + 1.0 - disk.radius * disk.radius) / (2.0 * disk.radius)).asinh();
        if gap > bound {
            return false;
        }
        test(&node.element);
        true
    });
    let value = (((2.0 - delta) * s).exp() / br_mass) * integral;
    Ok(ConditionalValue { value, hits, integral })
}

/// Brute-force λ_{E,x,s}(ψ) on a square z-grid of spacing `step`, testing
/// box membership of every reduced frame x n_z a_s.
pub fn conditional_leaf_grid(
    group: &SchottkyGroup,
    spec: &BoxSpec,
    br_mass: f64,
    delta: f64,
    x: &FramePoint,
    s: f64,
    psi: &LeafBump,
    step: f64,
) -> Result<f64, MeasureError> {
    let n = (2.0 * psi.radius / step).ceil() as i64;
    let a = Mobius::a(s);
    let mut integral = 0.0;
    for i in 0..n {
        for j in 0..n {
            let z = psi.center
                + Complex64::new(-psi.radius + (i as f64 + 0.5) * step, -psi.radius + (j as f64 + 0.5) * step);
            let v = psi.eval(z);
            if v == 0.0 {
                continue;
            }
            let g = x.rep.mul_raw(&Mobius::n(z)).mul_raw(&a);
            let rep = group.reduce_rep(&g)?;
            if spec.contains(&rep) {
                integral += v * step * step;
            }
        }
    }
    Ok((((2.0 - delta) * s).exp() / br_mass) * integral)
}

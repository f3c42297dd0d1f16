//! Total BMS mass, BMS mass of boxes, and the L² norm of φ̃₀ over a fundamental domain.

use num_complex::Complex64;

use super::phi0::Phi0Field;
use super::BoxSpec;
use crate::error::MeasureError;
use crate::parallel::ordered_map;
use crate::patterson::AtomicMeasure;
use crate::schottky::{Disk, SchottkyGroup};

/// Gromov kernel e^{β_ξ(o,p) + β_η(o,p)} = (1+|ξ|²)(1+|η|²)/|ξ−η|² for p on the geodesic ξη.
#[inline]
pub fn gromov_kernel(xi: Complex64, eta: Complex64) -> f64 {
    (1.0 + xi.norm_sqr()) * (1.0 + eta.norm_sqr()) / (xi - eta).norm_sqr()
}

/// Hyperbolic length of the part of the geodesic ξη lying outside every hemisphere.
///
/// Points of the geodesic are m + R cos φ · u at height R sin φ, φ ∈ (0, π),
/// with arclength log tan(φ/2). Returns ∞ if an end is not covered.
pub fn geodesic_length_outside(disks: &[Disk], xi: Complex64, eta: Complex64) -> f64 {
    let m = 0.5 * (xi + eta);
    let big_r = 0.5 * (eta - xi).norm();
    if big_r == 0.0 {
        return 0.0;
    }
    let u = (eta - xi) / (2.0 * big_r);
    let mut cover: Vec<(f64, f64)> = Vec::with_capacity(disks.len());
    for d in disks {
        let mc = m - d.center;
        let a = mc.norm_sqr() + big_r * big_r - d.radius * d.radius;
        let b = 2.0 * big_r * (u.conj() * mc).re;
        // inside ⇔ a + b cos φ < 0
        if b == 0.0 {
            if a < 0.0 {
                cover.push((0.0, std::f64::consts::PI));
            }
            continue;
        }
        let c = -a / b;
        if b > 0.0 {
            // cos φ < c
            if c <= -1.0 {
                continue;
            }
            cover.push((if c >= 1.0 { 0.0 } else { c.acos() }, std::f64::consts::PI));
        } else {
            // cos φ > c
            if c >= 1.0 {
                continue;
            }
            cover.push((0.0, if c <= -1.0 { std::f64::consts::PI } else { c.acos() }));
        }
    }
    cover.sort_by(|p, q| p.0.total_cmp(&q.0));
    let arc = |phi: f64| (0.5 * phi).tan().ln();
    let mut length = 0.0;
    let mut reached = 0.0;
    for (lo, hi) in cover {
        if lo > reached {
            if reached == 0.0 {
                return f64::INFINITY;
            }
            length += arc(lo) - arc(reached);
        }
        reached = f64::max(reached, hi);
    }
    if reached < std::f64::consts::PI {
        return f64::INFINITY;
    }
    length
}

/// |m^BMS| = Σ_{i≠j} wᵢwⱼ K(ξᵢ,ξⱼ)^δ L(ξᵢ,ξⱼ), where L is the length of the
/// geodesic inside the fundamental domain. The measure is merged on cells of
/// side `cell` first.
pub fn bms_total_mass(group: &SchottkyGroup, nu: &AtomicMeasure, delta: f64, cell: f64) -> Result<f64, MeasureError> {
    let coarse = nu.coarsen(cell);
    let atoms: Vec<(Complex64, f64)> = coarse.finite_atoms().collect();
    if atoms.len() < 2 {
        return Err(MeasureError::Quadrature("fewer than two atoms".into()));
    }
    let disks = group.disks();
    let rows = ordered_map(atoms.len(), |i| {
        let (xi, wi) = atoms[i];
        let mut acc = 0.0;
        for (j, &(eta, wj)) in atoms.iter().enumerate() {
            if j == i {
                continue;
            }
            let len = geodesic_length_outside(disks, xi, eta);
            if len.is_finite() {
                acc += wj * gromov_kernel(xi, eta).powf(delta) * len;
            }
        }
        wi * acc
    });
    Ok(rows.iter().sum())
}

/// Rescales ν so that the BMS measure it defines has total mass one; returns the factor.
pub fn normalize_bms(group: &SchottkyGroup, nu: &mut AtomicMeasure, delta: f64, cell: f64) -> Result<f64, MeasureError> {
    let total = bms_total_mass(group, nu, delta, cell)?;
    let k = 1.0 / total.sqrt();
    nu.scale(k);
    Ok(k)
}

/// m^BMS(E) for a box: a pair (ξ⁺, ξ⁻) meets x₀B_ρ when w = x₀⁻¹(ξ⁻) has |w| < ρ,
/// and then for s ∈ (−ρ, min(ρ, log(ρ|x₀⁻¹(ξ⁺) − w|))).
pub fn bms_box_mass(spec: &BoxSpec, nu: &AtomicMeasure, delta: f64) -> f64 {
    let rho = spec.rho;
    let inv = spec.center.rep.inverse();
    let pulled: Vec<(Option<Complex64>, Option<Complex64>, f64)> = nu
        .atoms
        .iter()
        .map(|a| (a.xi.finite(), inv.apply_boundary(a.xi).finite(), a.weight))
        .collect();
    let mut total = 0.0;
    for &(minus_xi, minus_w, w_minus) in &pulled {
        let (Some(minus_xi), Some(w)) = (minus_xi, minus_w) else { continue };
        if w.norm() >= rho {
            continue;
        }
        for &(plus_xi, plus_eta, w_plus) in &pulled {
            let (Some(plus_xi), Some(eta)) = (plus_xi, plus_eta) else { continue };
            if plus_xi == minus_xi {
                continue;
            }
            let top = rho.min((rho * (eta - w).norm()).ln());
            if top > -rho {
                total += w_plus * w_minus * gromov_kernel(plus_xi, minus_xi).powf(delta) * (top + rho);
            }
        }
    }
    total
}

/// Quadrature grid for [`phi0_l2_norm`].
#[derive(Debug, Clone, Copy)]
pub struct L2Grid {
    /// Nodes per unit of log |z − centre|.
    pub radial_per_unit: usize,
    pub angular: usize,
    /// Gauss–Legendre panels per unit of log t.
    pub panels_per_unit: f64,
}

impl Default for L2Grid {
    fn default() -> Self {
        L2Grid { radial_per_unit: 12, angular: 96, panels_per_unit: 0.75 }
    }
}

const GL3: [(f64, f64); 3] = [(-0.7745966692414834, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.7745966692414834, 5.0 / 9.0)];

/// ∫ over t > h of φ̃₀(z,t)² t⁻³ dt, with power-law tails below `t_lo` and above `t_hi`.
fn column_integral(field: &Phi0Field, z: Complex64, h: f64, t_lo: f64, t_hi: f64, panels_per_unit: f64) -> f64 {
    let delta = field.delta();
    let v0 = if h > 0.0 { h.ln() } else { t_lo.ln() };
    let v1 = t_hi.ln();
    let mut acc = 0.0;
    if v1 > v0 {
        let panels = ((v1 - v0) * panels_per_unit).ceil().max(1.0) as usize;
        let width = (v1 - v0) / panels as f64;
        for k in 0..panels {
            let mid = v0 + (k as f64 + 0.5) * width;
            for &(x, wt) in &GL3 {
                let v = mid + 0.5 * width * x;
                let t = v.exp();
                let f = field.eval(&crate::hyperbolic::H3Point { z, t });
                acc += 0.5 * width * wt * f * f * (-2.0 * v).exp();
            }
        }
    }
    if h <= 0.0 {
        // φ ≈ A t^δ near the boundary away from atoms
        let a = field.low_coefficient(z);
        acc += a * a * t_lo.powf(2.0 * delta - 2.0) / (2.0 * delta - 2.0);
    }
    // φ ≈ B t^{−δ} high up
    let b = field.high_coefficient();
    acc += b * b * t_hi.powf(-2.0 * delta - 2.0) / (2.0 * delta + 2.0);
    acc
}

/// C = ∫_{F₀} φ̃₀² dvol over the region above every hemisphere. Finite only for δ > 1.
///
/// Uses log-polar coordinates about the origin in z, Gauss–Legendre panels in
/// log t, and power-law tails in |z| and t.
pub fn phi0_l2_norm(group: &SchottkyGroup, field: &Phi0Field, grid: L2Grid) -> Result<f64, MeasureError> {
    let delta = field.delta();
    if delta <= 1.0 {
        return Err(MeasureError::Quadrature(format!("φ̃₀ is not square integrable for δ = {delta}")));
    }
    let disks = group.disks();
    let scale = disks.iter().map(|d| d.center.norm() + d.radius).fold(1.0, f64::max);
    let gap = disks.iter().map(|d| d.center.norm() - d.radius).fold(f64::INFINITY, f64::min).max(1e-6);
    let r_min = 1e-3 * gap;
    let r_max = 1e3 * scale;
    let (u0, u1) = (r_min.ln(), r_max.ln());
    let rings = ((u1 - u0) * grid.radial_per_unit as f64).ceil() as usize;
    let du = (u1 - u0) / rings as f64;
    let dphi = std::f64::consts::TAU / grid.angular as f64;
    let height = |z: Complex64| {
        disks
            .iter()
            .map(|d| d.radius * d.radius - (z - d.center).norm_sqr())
            .fold(0.0, f64::max)
            .sqrt()
    };
    let column = |z: Complex64| {
        let t_lo = 1e-4 * gap;
        let t_hi = 1e3 * (scale + z.norm());
        column_integral(field, z, height(z), t_lo, t_hi, grid.panels_per_unit)
    };
    let ring_sums = ordered_map(rings, |i| {
        let u = u0 + (i as f64 + 0.5) * du;
        let r = u.exp();
        let mut acc = 0.0;
        for j in 0..grid.angular {
            let z = Complex64::from_polar(r, (j as f64 + 0.5) * dphi);
            acc += column(z);
        }
        acc * r * r * du * dphi
    });
    let mut total: f64 = ring_sums.iter().sum();
    // disc below r_min
    total += std::f64::consts::PI * r_min * r_min * column(Complex64::new(0.0, 0.0));
    // tail beyond r_max, where the column integral decays like |z|^{−2−2δ}
    let last = ring_sums[rings - 1] / (du * r_max * r_max);
    total += last * r_max.powi(2) / (2.0 * delta);
    if !total.is_finite() {
        return Err(MeasureError::Quadrature("non-finite L² norm".into()));
    }
    Ok(total)
}


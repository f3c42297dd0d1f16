//! The base eigenfunction φ̃₀ = ∫ P(·, ξ)^δ dν(ξ) and its Laplacian check.

use num_complex::Complex64;

use crate::hyperbolic::{poisson_kernel, H3Point};
use crate::patterson::AtomicMeasure;

/// φ̃₀(p) = Σ w ((|ξ|²+1) t / (|z−ξ|²+t²))^δ by direct summation.
pub fn phi0(nu: &AtomicMeasure, delta: f64, p: &H3Point) -> f64 {
    nu.atoms.iter().map(|a| a.weight * poisson_kernel(a.xi, p).powf(delta)).sum()
}

/// Precomputed atoms for repeated evaluation of φ̃₀.
#[derive(Debug, Clone)]
pub struct Phi0Field {
    delta: f64,
    // (ξ, w (1+|ξ|²)^δ)
    finite: Vec<(Complex64, f64)>,
    at_infinity: f64,
}

impl Phi0Field {
    pub fn new(nu: &AtomicMeasure, delta: f64) -> Self {
        let mut finite = Vec::with_capacity(nu.len());
        let mut at_infinity = 0.0;
        for a in &nu.atoms {
            match a.xi.finite() {
                Some(z) => finite.push((z, a.weight * (1.0 + z.norm_sqr()).powf(delta))),
                None => at_infinity += a.weight,
            }
        }
        Phi0Field { delta, finite, at_infinity }
    }

    /// Field of the measure merged on square cells of side `cell`.
    pub fn coarse(nu: &AtomicMeasure, delta: f64, cell: f64) -> Self {
        Self::new(&nu.coarsen(cell), delta)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn atom_count(&self) -> usize {
        self.finite.len()
    }

    #[inline]
    pub fn eval(&self, p: &H3Point) -> f64 {
        let t = p.t;
        let t2 = t * t;
        let mut acc = 0.0;
        for &(xi, c) in &self.finite {
            let q = t / ((p.z - xi).norm_sqr() + t2);
            acc += c * q.powf(self.delta);
        }
        acc + self.at_infinity * t.powf(self.delta)
    }

    /// Σ c |z − ξ|^{−2δ}: the coefficient of t^δ as t → 0 away from atoms.
    pub fn low_coefficient(&self, z: Complex64) -> f64 {
        self.finite.iter().map(|&(xi, c)| c * (z - xi).norm_sqr().powf(-self.delta)).sum()
    }

    /// Σ c: the coefficient of t^{−δ} as t → ∞.
    pub fn high_coefficient(&self) -> f64 {
        self.finite.iter().map(|&(_, c)| c).sum()
    }
}

/// Hyperbolic Laplacian by central differences with step h·t in each coordinate:
/// Δf = t²(f_xx + f_yy + f_tt) − t f_t.
pub fn hyperbolic_laplacian<F: Fn(&H3Point) -> f64>(f: F, p: &H3Point, h: f64) -> f64 {
    let step = h * p.t;
    let f0 = f(p);
    let at = |dz: Complex64, dt: f64| f(&H3Point { z: p.z + dz, t: p.t + dt });
    let fxx = (at(Complex64::new(step, 0.0), 0.0) - 2.0 * f0 + at(Complex64::new(-step, 0.0), 0.0)) / (step * step);
    let fyy = (at(Complex64::new(0.0, step), 0.0) - 2.0 * f0 + at(Complex64::new(0.0, -step), 0.0)) / (step * step);
    let up = at(Complex64::new(0.0, 0.0), step);
    let down = at(Complex64::new(0.0, 0.0), -step);
    let ftt = (up - 2.0 * f0 + down) / (step * step);
    let ft = (up - down) / (2.0 * step);
    p.t * p.t * (fxx + fyy + ftt) - p.t * ft
}

/// Relative residual |−Δφ̃₀ − δ(2−δ)φ̃₀| / φ̃₀ at p.
pub fn laplacian_residual(nu: &AtomicMeasure, delta: f64, p: &H3Point, h: f64) -> f64 {
    let field = Phi0Field::new(nu, delta);
    let f = |q: &H3Point| field.eval(q);
    let v = field.eval(p);
    (-hyperbolic_laplacian(f, p, h) - delta * (2.0 - delta) * v).abs() / v
}

/// Residual at h divided by residual at h/2; near 4 for a second-order scheme.
pub fn richardson_ratio(nu: &AtomicMeasure, delta: f64, p: &H3Point, h: f64) -> f64 {
    laplacian_residual(nu, delta, p, h) / laplacian_residual(nu, delta, p, 0.5 * h)
}

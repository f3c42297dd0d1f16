//! Points of ℍ³ and of its boundary, distance and Busemann functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Mobius;
use crate::error::GeometryError;

/// A point (z, t) of the upper half-space, t > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Point {
    pub z: Complex64,
    pub t: f64,
}

impl H3Point {
    /// The base point o = (0, 1).
    pub const ORIGIN: H3Point = H3Point { z: Complex64::new(0.0, 0.0), t: 1.0 };

    pub fn new(z: Complex64, t: f64) -> Result<Self, GeometryError> {
        if t > 0.0 && t.is_finite() && z.is_finite() {
            Ok(H3Point { z, t })
        } else {
            Err(GeometryError::NonPositiveHeight(t))
        }
    }
}

/// A point of ∂ℍ³ = ℂ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            BoundaryPoint::Finite(z) => Some(z),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Chordal distance on the unit sphere, bounded by 2.
    pub fn chordal(self, other: BoundaryPoint) -> f64 {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => 0.0,
            (BoundaryPoint::Finite(z), BoundaryPoint::Infinity) | (BoundaryPoint::Infinity, BoundaryPoint::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (BoundaryPoint::Finite(z), BoundaryPoint::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
            }
        }
    }
}

impl From<Complex64> for BoundaryPoint {
    fn from(z: Complex64) -> Self {
        BoundaryPoint::Finite(z)
    }
}

/// Hyperbolic distance in the upper half-space.
#[inline]
pub fn hyp_dist(p: &H3Point, q: &H3Point) -> f64 {
    let num = (p.z - q.z).norm_sqr() + (p.t - q.t) * (p.t - q.t);
    let y = num / (2.0 * p.t * q.t);
    // acosh(1 + y)
    (y + (y * (y + 2.0)).sqrt()).ln_1p()
}

/// cosh of the hyperbolic distance, cheaper than [`hyp_dist`] for comparisons.
#[inline]
pub fn cosh_dist(p: &H3Point, q: &H3Point) -> f64 {
    ((p.z - q.z).norm_sqr() + p.t * p.t + q.t * q.t) / (2.0 * p.t * q.t)
}

/// The horofunction t / (|z − ξ|² + t²); it is t itself when ξ = ∞.
#[inline]
pub fn horo_height(xi: BoundaryPoint, p: &H3Point) -> f64 {
    match xi {
        BoundaryPoint::Infinity => p.t,
        BoundaryPoint::Finite(x) => p.t / ((p.z - x).norm_sqr() + p.t * p.t),
    }
}

/// Poisson kernel normalised at o: e^{β_ξ(o, p)}.
#[inline]
pub fn poisson_kernel(xi: BoundaryPoint, p: &H3Point) -> f64 {
    match xi {
        BoundaryPoint::Infinity => p.t,
        BoundaryPoint::Finite(x) => (1.0 + x.norm_sqr()) * p.t / ((p.z - x).norm_sqr() + p.t * p.t),
    }
}

/// Busemann cocycle β_ξ(x, y) in closed form (log ratio of horofunctions).
#[inline]
pub fn busemann_closed(xi: BoundaryPoint, x: &H3Point, y: &H3Point) -> f64 {
    (horo_height(xi, y) / horo_height(xi, x)).ln()
}

const PROBE_TOL: f64 = 1e-10;
const PROBE_MAX_DOUBLINGS: usize = 40;

/// Busemann cocycle β_ξ(x, y) = lim d(x, ξ_s) − d(y, ξ_s), evaluated by pushing
/// a probe along the ray from o towards ξ until successive values agree.
pub fn busemann(xi: BoundaryPoint, x: &H3Point, y: &H3Point) -> Result<f64, GeometryError> {
    // k fixes o and sends 0 to ξ, so the ray o → ξ is s ↦ k · (0, e^{−s}).
    let k = Mobius::k_to(xi);
    let mut s: f64 = 1.0;
    let mut prev = f64::NAN;
    let mut change = f64::INFINITY;
    for _ in 0..PROBE_MAX_DOUBLINGS {
        let probe = k.apply_h3(&H3Point { z: Complex64::new(0.0, 0.0), t: (-s).exp() });
        let val = hyp_dist(x, &probe) - hyp_dist(y, &probe);
        change = (val - prev).abs();
        if change < PROBE_TOL {
            return Ok(val);
        }
        prev = val;
        s *= 1.5;
        if (-s).exp() < 1e-150 {
            break;
        }
    }
    Err(GeometryError::BusemannNonConvergence { iterations: PROBE_MAX_DOUBLINGS, last_change: change })
}

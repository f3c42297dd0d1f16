//! Elements of PSL₂(ℂ) stored as unimodular matrices with a canonical sign.

use num_complex::Complex64;
use std::ops::Mul;

use super::{BoundaryPoint, H3Point};
use crate::error::GeometryError;

/// A Möbius transformation z ↦ (az+b)/(cz+d) with ad − bc = 1.
///
/// The overall sign is fixed so that the first entry (in the order a, b, c, d)
/// that is not exactly zero has positive real part, or zero real part and
/// positive imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn positive(z: Complex64) -> bool {
    z.re > 0.0 || (z.re == 0.0 && z.im > 0.0)
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius { a: ONE, b: ZERO, c: ZERO, d: ONE };

    /// Builds the element from any invertible matrix, rescaling to determinant one.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, GeometryError> {
        let det = a * d - b * c;
        if !(det.norm() > 0.0) || !det.is_finite() {
            return Err(GeometryError::SingularMatrix(det.norm()));
        }
        let k = det.sqrt().inv();
        Ok(Mobius { a: a * k, b: b * k, c: c * k, d: d * k }.canonical())
    }

    /// Flips the sign if needed so the matrix is in canonical form.
    #[must_use]
    pub fn canonical(self) -> Self {
        let lead = [self.a, self.b, self.c, self.d].into_iter().find(|z| z.re != 0.0 || z.im != 0.0);
        match lead {
            Some(z) if !positive(z) => Mobius { a: -self.a, b: -self.b, c: -self.c, d: -self.d },
            _ => self,
        }
    }

    /// a_s = diag(e^{s/2}, e^{-s/2}); moves o = (0,1) to (0, e^s).
    pub fn a(s: f64) -> Self {
        let h = 0.5 * s;
        Mobius { a: Complex64::new(h.exp(), 0.0), b: ZERO, c: ZERO, d: Complex64::new((-h).exp(), 0.0) }
    }

    /// n_z = (1 0; z 1), the horospherical subgroup fixing 0.
    pub fn n(z: Complex64) -> Self {
        Mobius { a: ONE, b: ZERO, c: z, d: ONE }.canonical()
    }

    /// n⁻_w = (1 w; 0 1), the opposite horospherical subgroup fixing ∞.
    pub fn n_minus(w: Complex64) -> Self {
        Mobius { a: ONE, b: w, c: ZERO, d: ONE }
    }

    /// m_θ = diag(e^{iθ}, e^{-iθ}).
    pub fn m(theta: f64) -> Self {
        Mobius { a: Complex64::from_polar(1.0, theta), b: ZERO, c: ZERO, d: Complex64::from_polar(1.0, -theta) }.canonical()
    }

    /// One-parameter unipotent u_t = n_t with real t.
    pub fn u(t: f64) -> Self {
        Self::n(Complex64::new(t, 0.0))
    }

    /// The unique K-element of the form (α β; −β̄ ᾱ) sending 0 to `xi`.
    pub fn k_to(xi: BoundaryPoint) -> Self {
        match xi {
            BoundaryPoint::Infinity => Mobius { a: ZERO, b: ONE, c: -ONE, d: ZERO },
            BoundaryPoint::Finite(x) => {
                let s = (1.0 + x.norm_sqr()).sqrt().recip();
                Mobius { a: Complex64::new(s, 0.0), b: x * s, c: -x.conj() * s, d: Complex64::new(s, 0.0) }
            }
        }
    }

    /// An element g with g(∞) = `plus` and g(0) = `minus`.
    pub fn from_endpoints(plus: BoundaryPoint, minus: BoundaryPoint) -> Result<Self, GeometryError> {
        match (plus, minus) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => Err(GeometryError::SingularMatrix(0.0)),
            (BoundaryPoint::Infinity, BoundaryPoint::Finite(m)) => Ok(Self::n_minus(m)),
            (BoundaryPoint::Finite(p), BoundaryPoint::Infinity) => Self::new(p, -ONE, ONE, ZERO),
            (BoundaryPoint::Finite(p), BoundaryPoint::Finite(m)) => Self::new(p, m, ONE, ONE),
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Self {
        Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical()
    }

    /// Product without sign canonicalisation, for inner loops.
    #[inline]
    pub fn mul_raw(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Sum of squared moduli of the entries; equals 2 cosh d(o, g·o).
    #[inline]
    pub fn frobenius_sq(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    /// Hyperbolic displacement d(o, g·o) of the base point.
    #[inline]
    pub fn displacement(&self) -> f64 {
        let x = 0.5 * self.frobenius_sq();
        // acosh(x) written to stay accurate near x = 1
        let y = x - 1.0;
        (y + (y * (x + 1.0)).sqrt()).ln_1p()
    }

    /// Largest entrywise distance to `other` modulo the overall sign.
    pub fn distance_mod_sign(&self, other: &Mobius) -> f64 {
        let plus = [self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let minus = [self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        plus.min(minus)
    }

    /// True when the two matrices agree entrywise to `tol` up to sign.
    pub fn approx_eq(&self, other: &Mobius, tol: f64) -> bool {
        self.distance_mod_sign(other) <= tol
    }

    /// Action on the upper half-space by the Poincaré extension.
    #[inline]
    pub fn apply_h3(&self, p: &H3Point) -> H3Point {
        let (w, t) = (p.z, p.t);
        let num = self.a * w + self.b;
        let den = self.c * w + self.d;
        let t2 = t * t;
        let q = den.norm_sqr() + self.c.norm_sqr() * t2;
        let z = (num * den.conj() + self.a * self.c.conj() * t2) / q;
        H3Point { z, t: t / q }
    }

    /// Image of the base point o = (0, 1).
    #[inline]
    pub fn apply_origin(&self) -> H3Point {
        let q = self.c.norm_sqr() + self.d.norm_sqr();
        let z = (self.b * self.d.conj() + self.a * self.c.conj()) / q;
        H3Point { z, t: 1.0 / q }
    }

    /// Action on the Riemann sphere; the pole and ∞ are handled exactly.
    pub fn apply_boundary(&self, xi: BoundaryPoint) -> BoundaryPoint {
        match xi {
            BoundaryPoint::Infinity => {
                if self.c == ZERO {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == ZERO {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Action on a finite point, assuming it is not the pole.
    #[inline]
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// |g'(z)| on the boundary.
    #[inline]
    pub fn derivative_norm(&self, z: Complex64) -> f64 {
        (self.c * z + self.d).norm_sqr().recip()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }
}

impl Mul for Mobius {
    type Output = Mobius;
    fn mul(self, rhs: Mobius) -> Mobius {
        self.mul_raw(&rhs).canonical()
    }
}

impl Mul for &Mobius {
    type Output = Mobius;
    fn mul(self, rhs: &Mobius) -> Mobius {
        self.mul_raw(rhs).canonical()
    }
}

impl Default for Mobius {
    fn default() -> Self {
        Self::IDENTITY
    }
}

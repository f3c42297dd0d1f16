//! Euclidean disks in ℂ and the hemispheres they bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hyperbolic::{H3Point, Mobius};

/// Closed round disk |z − center| ≤ radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// |z − c|² + t² − r²; negative inside the hemisphere over the disk.
    #[inline]
    pub fn hemisphere_power(&self, p: &H3Point) -> f64 {
        (p.z - self.center).norm_sqr() + p.t * p.t - self.radius * self.radius
    }

    /// Signed hyperbolic distance from `p` to the hemisphere, positive outside.
    pub fn signed_distance(&self, p: &H3Point) -> f64 {
        (self.hemisphere_power(p) / (2.0 * self.radius * p.t)).asinh()
    }

    /// Gap between the two disks (negative when they overlap).
    pub fn gap(&self, other: &Disk) -> f64 {
        (self.center - other.center).norm() - self.radius - other.radius
    }

    /// Image under `g`, valid when the pole of `g` lies outside the disk.
    pub fn image(&self, g: &Mobius) -> Disk {
        let r = self.radius;
        if g.c.norm() == 0.0 {
            let k = g.a / g.d;
            return Disk { center: k * self.center + g.b / g.d, radius: k.norm() * r };
        }
        let pole = -g.d / g.c;
        let off = pole - self.center;
        // the point symmetric to the pole goes to the centre of the image
        let sym = self.center + r * r / off.conj();
        let center = g.apply(sym);
        let dir = if off.norm() > 0.0 { off / off.norm() } else { Complex64::new(1.0, 0.0) };
        let near = g.apply(self.center + dir * r);
        let far = g.apply(self.center - dir * r);
        let radius = 0.5 * (near - far).norm();
        Disk { center, radius }
    }
}

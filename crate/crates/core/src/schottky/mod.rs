//! Classical Schottky groups defined by paired disks.
//!
//! Letter `2i` is the generator gᵢ, which maps the exterior of `pairs[i].from`
//! onto the interior of `pairs[i].to`; letter `2i + 1` is gᵢ⁻¹. The disk
//! attached to letter k is the one it maps into, so the disk a letter pushes
//! away from is the disk of `k ^ 1`.

mod disk;
mod limit;
mod reduce;
pub mod table;
mod words;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use disk::Disk;
pub use limit::contraction_estimate;
pub use reduce::Reduction;
pub use words::{count_reduced_words, enumerate_words, CyclicGroup, LetterSet, Word, WordNode};

use crate::error::SchottkyError;
use crate::hyperbolic::{H3Point, Mobius};

/// Two disks paired by one generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPair {
    pub from: Disk,
    pub to: Disk,
}

/// Minimal Euclidean gap required between disks.
pub const MIN_GAP: f64 = 1e-9;

/// The loxodromic without twist pairing `from` with `to`.
///
/// It is the conjugate of a real dilation whose fixed points are the two
/// limit points of the pencil spanned by the circles, so its axis is the
/// common perpendicular of the two hemispheres.
pub fn pairing_generator(pair: &DiskPair) -> Result<Mobius, SchottkyError> {
    let (c, r) = (pair.from.center, pair.from.radius);
    let (c2, r2) = (pair.to.center, pair.to.radius);
    let delta = c2 - c;
    let dist = delta.norm();
    let u = delta / dist;
    let sum = (r * r + dist * dist - r2 * r2) / dist;
    let disc = 0.25 * sum * sum - r * r;
    if !(disc > 0.0) {
        return Err(SchottkyError::OverlappingDisks(0, 1));
    }
    let root = disc.sqrt();
    // the root inside `from` is found without cancellation
    let x_far = 0.5 * sum + root;
    let x_near = r * r / x_far;
    let l1 = c + u * x_near;
    let l2 = c + u * x_far;
    let one = Complex64::new(1.0, 0.0);
    let t = Mobius::new(one, -l1, one, -l2)?;
    let i = Complex64::new(0.0, 1.0);
    let ratio = t.apply(c2 + u * i * r2).norm() / t.apply(c + u * i * r).norm();
    let dil = Mobius::a(ratio.ln());
    Ok(t.inverse() * dil * t)
}

/// A Schottky group with its generators, inverses and disks.
#[derive(Debug, Clone)]
pub struct SchottkyGroup {
    pairs: Vec<DiskPair>,
    letters: Vec<Mobius>,
    disks: Vec<Disk>,
    contraction: f64,
    fuchsian: bool,
}

impl SchottkyGroup {
    /// Validates the disks and builds the generators.
    pub fn build(pairs: &[DiskPair]) -> Result<Self, SchottkyError> {
        if pairs.len() < 2 {
            return Err(SchottkyError::RankTooSmall { min: 2, got: pairs.len() });
        }
        let mut disks = Vec::with_capacity(2 * pairs.len());
        for p in pairs {
            // disk of letter 2i is `to`, disk of letter 2i+1 is `from`
            disks.push(p.to);
            disks.push(p.from);
        }
        for (i, d) in disks.iter().enumerate() {
            if !(d.radius > 0.0) || !d.radius.is_finite() || !d.center.is_finite() {
                return Err(SchottkyError::BadRadius(i));
            }
        }
        for i in 0..disks.len() {
            for j in i + 1..disks.len() {
                if disks[i].gap(&disks[j]) <= MIN_GAP {
                    return Err(SchottkyError::OverlappingDisks(i, j));
                }
            }
            if disks[i].hemisphere_power(&H3Point::ORIGIN) <= 0.0 {
                return Err(SchottkyError::BasePointCovered(i));
            }
        }
        let mut letters = Vec::with_capacity(disks.len());
        for p in pairs {
            let g = pairing_generator(p)?;
            letters.push(g);
            letters.push(g.inverse());
        }
        let fuchsian = disks.iter().all(|d| d.center.im == 0.0)
            && letters.iter().all(|g| g.a.im == 0.0 && g.b.im == 0.0 && g.c.im == 0.0 && g.d.im == 0.0);
        let mut group = SchottkyGroup { pairs: pairs.to_vec(), letters, disks, contraction: 0.0, fuchsian };
        group.contraction = contraction_estimate(&group);
        Ok(group)
    }

    pub fn pairs(&self) -> &[DiskPair] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    /// Disk that letter `k` maps the exterior of disk `k ^ 1` into.
    pub fn disk(&self, k: usize) -> &Disk {
        &self.disks[k]
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    /// Empirical contraction factor of the generators on the disk images.
    pub fn contraction(&self) -> f64 {
        self.contraction
    }

    /// True when all disks are centred on ℝ and all generators are real.
    pub fn is_fuchsian(&self) -> bool {
        self.fuchsian
    }

    /// Element of a word given as letters.
    pub fn element(&self, word: &[u8]) -> Mobius {
        word.iter().fold(Mobius::IDENTITY, |acc, &k| acc.mul_raw(&self.letters[k as usize])).canonical()
    }

    /// Innermost nested disk D_γ = g_{l1}⋯g_{l(n−1)}(D_{ln}) of a nonempty reduced word.
    pub fn nested_disk(&self, word: &[u8]) -> Disk {
        let (last, prefix) = word.split_last().expect("nonempty word");
        self.disks[*last as usize].image(&self.element(prefix))
    }

    /// Same as [`nested_disk`](Self::nested_disk) with the prefix element already known.
    #[inline]
    pub fn nested_disk_from(&self, prefix: &Mobius, last: usize) -> Disk {
        self.disks[last].image(prefix)
    }

    /// True when o = (0,1) lies outside every hemisphere, i.e. in the fundamental domain.
    pub fn in_fundamental_domain(&self, p: &H3Point) -> bool {
        self.disks.iter().all(|d| d.hemisphere_power(p) >= 0.0)
    }
}

impl LetterSet for SchottkyGroup {
    fn letter_count(&self) -> usize {
        self.letters.len()
    }
    fn letter(&self, k: usize) -> &Mobius {
        &self.letters[k]
    }
    fn inverse_letter(&self, k: usize) -> usize {
        k ^ 1
    }
}

#[cfg(test)]
mod tests;

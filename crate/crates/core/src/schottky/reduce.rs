//! Reduction of group elements to the fundamental domain outside all hemispheres.

use super::{LetterSet, SchottkyGroup};
use crate::error::SchottkyError;
use crate::hyperbolic::{H3Point, Mobius};

/// Result of reducing g: g = γ · rep with rep · o in the fundamental domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub rep: Mobius,
    pub word: Vec<u8>,
    pub gamma: Mobius,
}

/// Step budget for one reduction.
pub const REDUCE_BUDGET: usize = 100_000;

/// Real offset applied when o·rep sits exactly on a hemisphere.
const TIE_SHIFT: f64 = 1e-12;

impl SchottkyGroup {
    /// Index of the hemisphere containing `p`, if any.
    #[inline]
    pub fn covering_disk(&self, p: &H3Point) -> Option<usize> {
        for (k, d) in self.disks().iter().enumerate() {
            let pw = d.hemisphere_power(p);
            if pw < 0.0 {
                return Some(k);
            }
            if pw == 0.0 {
                let shifted = H3Point { z: p.z + TIE_SHIFT, t: p.t };
                log::debug!("base point on hemisphere {k}; shifting by {TIE_SHIFT:e}");
                if d.hemisphere_power(&shifted) < 0.0 {
                    return Some(k);
                }
            }
        }
        None
    }

    /// Canonical representative of Γg: pulls g·o back across hemispheres until
    /// it lies in the fundamental domain.
    pub fn reduce(&self, g: &Mobius) -> Result<Reduction, SchottkyError> {
        let mut rep = *g;
        let mut word: Vec<u8> = Vec::new();
        for _ in 0..REDUCE_BUDGET {
            let p = rep.apply_origin();
            match self.covering_disk(&p) {
                None => {
                    let gamma = self.element(&word);
                    return Ok(Reduction { rep: rep.canonical(), word, gamma });
                }
                Some(k) => {
                    // rep·o lies in the disk of letter k: undo that letter
                    rep = self.letter(k ^ 1).mul_raw(&rep);
                    if word.last().map(|&l| l as usize) == Some(k ^ 1) {
                        word.pop();
                    } else {
                        word.push(k as u8);
                    }
                }
            }
        }
        Err(SchottkyError::IterationBudgetExceeded(REDUCE_BUDGET))
    }

    /// Reduction that only returns the representative.
    pub fn reduce_rep(&self, g: &Mobius) -> Result<Mobius, SchottkyError> {
        let mut rep = *g;
        for _ in 0..REDUCE_BUDGET {
            match self.covering_disk(&rep.apply_origin()) {
                None => return Ok(rep.canonical()),
                Some(k) => rep = self.letter(k ^ 1).mul_raw(&rep),
            }
        }
        Err(SchottkyError::IterationBudgetExceeded(REDUCE_BUDGET))
    }
}

//! Limit-set sampling and contraction estimates.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{LetterSet, SchottkyGroup};

const BOUNDARY_SAMPLES: usize = 64;

/// Largest |g_k'| over sampled boundary points of the disks a letter acts on.
pub fn contraction_estimate(g: &SchottkyGroup) -> f64 {
    let n = g.letter_count();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let gen = g.letter(k);
        for j in 0..n {
            if j == g.inverse_letter(k) {
                continue;
            }
            let d = g.disk(j);
            for s in 0..BOUNDARY_SAMPLES {
                let ang = std::f64::consts::TAU * s as f64 / BOUNDARY_SAMPLES as f64;
                let z = d.center + Complex64::from_polar(d.radius, ang);
                worst = worst.max(gen.derivative_norm(z));
            }
        }
    }
    worst
}

impl SchottkyGroup {
    /// Limit-set samples: centres of the nested disks of uniformly random
    /// reduced words of length `depth`.
    pub fn sample_limit_set(&self, depth: usize, count: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let w = self.random_word(&mut rng, depth.max(1));
                self.nested_disk(&w).center
            })
            .collect()
    }

    /// Bound on the nested-disk diameter at the given depth.
    pub fn resolution(&self, depth: usize) -> f64 {
        let rmax = self.disks().iter().map(|d| d.radius).fold(0.0, f64::max);
        2.0 * rmax * self.contraction().min(1.0).powi(depth.saturating_sub(1) as i32)
    }

    /// Largest nested-disk diameter over all words of exactly `depth` letters.
    pub fn max_nested_diameter(&self, depth: usize) -> f64 {
        let mut worst: f64 = 0.0;
        self.visit_words(depth, |node| {
            if node.len() == depth {
                worst = worst.max(2.0 * self.nested_disk_from(&node.prefix, node.last()).radius);
            }
            true
        });
        worst
    }
}

//! Atomic approximations of Patterson–Sullivan measures.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::PattersonError;
use crate::hyperbolic::{hyp_dist, BoundaryPoint, H3Point};
use crate::parallel::{chunk_seed, ordered_map};
use crate::schottky::{count_reduced_words, LetterSet, SchottkyGroup};

/// One weighted boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub xi: BoundaryPoint,
    pub weight: f64,
}

/// Where an atomic measure came from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub exponent: f64,
    pub max_len: usize,
    pub band: usize,
    pub base: Option<(f64, f64, f64)>,
    pub seed: u64,
    pub sampled: bool,
}

/// A finite weighted sum of Dirac masses on ∂ℍ³.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomicMeasure {
    pub atoms: Vec<Atom>,
    pub provenance: Provenance,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>, provenance: Provenance) -> Self {
        AtomicMeasure { atoms, provenance }
    }

    /// Single atom of the given mass.
    pub fn dirac(xi: BoundaryPoint, weight: f64) -> Self {
        AtomicMeasure { atoms: vec![Atom { xi, weight }], provenance: Provenance::default() }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Multiplies every weight by `k`.
    pub fn scale(&mut self, k: f64) {
        for a in &mut self.atoms {
            a.weight *= k;
        }
    }

    /// Finite atoms as (position, weight) pairs.
    pub fn finite_atoms(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.atoms.iter().filter_map(|a| a.xi.finite().map(|z| (z, a.weight)))
    }

    /// Mass of the open Euclidean ball B(center, r).
    pub fn ball_mass(&self, center: Complex64, r: f64) -> f64 {
        let r2 = r * r;
        self.finite_atoms().filter(|(z, _)| (z - center).norm_sqr() < r2).map(|(_, w)| w).sum()
    }

    /// Merges atoms falling in the same square cell of side `h` into one atom at
    /// their weighted centroid. Cells are visited in a fixed order.
    pub fn coarsen(&self, h: f64) -> AtomicMeasure {
        let mut keyed: Vec<((i64, i64), Complex64, f64)> = self
            .finite_atoms()
            .map(|(z, w)| (((z.re / h).floor() as i64, (z.im / h).floor() as i64), z, w))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let mut atoms: Vec<Atom> = Vec::new();
        let mut i = 0;
        while i < keyed.len() {
            let key = keyed[i].0;
            let mut w = 0.0;
            let mut m = Complex64::new(0.0, 0.0);
            while i < keyed.len() && keyed[i].0 == key {
                w += keyed[i].2;
                m += keyed[i].1 * keyed[i].2;
                i += 1;
            }
            atoms.push(Atom { xi: BoundaryPoint::Finite(m / w), weight: w });
        }
        atoms.extend(self.atoms.iter().filter(|a| a.xi == BoundaryPoint::Infinity).copied());
        AtomicMeasure { atoms, provenance: self.provenance.clone() }
    }

    /// Cumulative weights, for repeated sampling with [`draw`](Self::draw).
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.atoms
            .iter()
            .map(|a| {
                acc += a.weight;
                acc
            })
            .collect()
    }

    /// Index of an atom drawn with probability proportional to its weight.
    pub fn draw<R: Rng>(&self, cdf: &[f64], rng: &mut R) -> usize {
        let total = *cdf.last().expect("nonempty measure");
        let u = rng.random::<f64>() * total;
        cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
    }
}

/// Options for [`build_ps`].
#[derive(Debug, Clone, Copy)]
pub struct PsOptions {
    /// Words of length max_len − band ..= max_len carry atoms.
    pub band: usize,
    /// Above this many band words, atoms are drawn by stratified random words.
    pub max_atoms: usize,
}

impl Default for PsOptions {
    fn default() -> Self {
        PsOptions { band: 2, max_atoms: 2_000_000 }
    }
}

/// Patterson–Sullivan approximation at exponent `s` seen from `x`:
/// atoms at the nested-disk centres of band words γ with weights
/// e^{−s d(x, γo)}, divided by Σ e^{−s d(o, γo)} over the same words.
pub fn build_ps(
    group: &SchottkyGroup,
    x: &H3Point,
    s: f64,
    max_len: usize,
    seed: u64,
    opts: PsOptions,
) -> Result<AtomicMeasure, PattersonError> {
    if max_len == 0 || s <= 0.0 {
        return Err(PattersonError::InvalidArgument(format!("max_len {max_len}, s {s}")));
    }
    let lo = max_len.saturating_sub(opts.band).max(1);
    let n = group.letter_count();
    let band_words: u128 = count_reduced_words(n, max_len) - count_reduced_words(n, lo - 1);
    let sampled = band_words > opts.max_atoms as u128;
    let (atoms, norm) =
        if sampled { sampled_band(group, x, s, lo, max_len, seed, opts.max_atoms) } else { exact_band(group, x, s, lo, max_len) };
    let mut m = AtomicMeasure::new(
        atoms,
        Provenance {
            config_hash: String::new(),
            exponent: s,
            max_len,
            band: opts.band,
            base: Some((x.z.re, x.z.im, x.t)),
            seed,
            sampled,
        },
    );
    m.scale(norm.recip());
    Ok(m)
}

fn exact_band(group: &SchottkyGroup, x: &H3Point, s: f64, lo: usize, hi: usize) -> (Vec<Atom>, f64) {
    let n = group.letter_count();
    let parts = ordered_map(n, |k| {
        let mut atoms = Vec::new();
        let mut norm = 0.0;
        group.visit_subtree(&[k as u8], hi, |node| {
            if node.len() >= lo {
                let p = node.element.apply_origin();
                let xi = group.nested_disk_from(&node.prefix, node.last()).center;
                atoms.push(Atom { xi: BoundaryPoint::Finite(xi), weight: (-s * hyp_dist(x, &p)).exp() });
                norm += (-s * node.element.displacement()).exp();
            }
            true
        });
        (atoms, norm)
    });
    let mut atoms = Vec::new();
    let mut norm = 0.0;
    for (a, z) in parts {
        atoms.extend(a);
        norm += z;
    }
    (atoms, norm)
}

const SAMPLE_CHUNK: usize = 4096;

fn sampled_band(group: &SchottkyGroup, x: &H3Point, s: f64, lo: usize, hi: usize, seed: u64, budget: usize) -> (Vec<Atom>, f64) {
    let n = group.letter_count();
    let counts: Vec<f64> = (lo..=hi).map(|k| n as f64 * ((n - 1) as f64).powi(k as i32 - 1)).collect();
    let total: f64 = counts.iter().sum();
    let mut atoms = Vec::with_capacity(budget);
    let mut norm = 0.0;
    for (i, k) in (lo..=hi).enumerate() {
        let draws = ((budget as f64 * counts[i] / total).round() as usize).max(1);
        let scale = counts[i] / draws as f64;
        let n_chunks = draws.div_ceil(SAMPLE_CHUNK);
        let parts = ordered_map(n_chunks, |c| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed ^ ((k as u64) << 32), c as u64));
            let len = SAMPLE_CHUNK.min(draws - c * SAMPLE_CHUNK);
            let mut out = Vec::with_capacity(len);
            let mut z = 0.0;
            for _ in 0..len {
                let w = group.random_word(&mut rng, k);
                let (last, head) = w.split_last().unwrap();
                let prefix = group.element(head);
                let el = prefix.mul_raw(group.letter(*last as usize));
                let xi = group.nested_disk_from(&prefix, *last as usize).center;
                out.push(Atom { xi: BoundaryPoint::Finite(xi), weight: scale * (-s * hyp_dist(x, &el.apply_origin())).exp() });
                z += scale * (-s * el.displacement()).exp();
            }
            (out, z)
        });
        for (a, z) in parts {
            atoms.extend(a);
            norm += z;
        }
    }
    (atoms, norm)
}

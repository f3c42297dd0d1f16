//! Weighted samplers for the Burger–Roblin and Bowen–Margulis–Sullivan measures.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::boxes::{atom_windows, br_box_mass};
use super::frame::hopf_frame;
use super::{BoxSpec, FramePoint, WeightedSample};
use crate::error::MeasureError;
use crate::hyperbolic::{frame_endpoints, horo_height, BoundaryPoint, H3Point, Mobius};
use crate::parallel::{chunk_seed, ordered_map};
use crate::patterson::AtomicMeasure;
use crate::schottky::SchottkyGroup;

/// BR density in KAN coordinates: dm^BR(k a_s n_z) = e^{−δs} dν(k(0)) ds dz dθ.
pub fn br_density_kan(s: f64, delta: f64) -> f64 {
    (-delta * s).exp()
}

/// BMS density e^{δ(β_{u⁺}(o,π(u)) + β_{u⁻}(o,π(u)))} of a frame.
pub fn bms_density(u: &Mobius, delta: f64) -> f64 {
    let (plus, minus) = frame_endpoints(u);
    let p = u.apply_origin();
    let o = H3Point::ORIGIN;
    let bp = horo_height(plus, &p) / horo_height(plus, &o);
    let bm = horo_height(minus, &p) / horo_height(minus, &o);
    (bp * bm).powf(delta)
}

const CHUNK: usize = 1024;

/// Samples of m^BR restricted to the box: admissible atoms are drawn in
/// proportion to their weight, θ uniformly, s uniformly on its window and z
/// uniformly on its disk; each sample carries weight density / proposal.
pub fn sample_br_box(
    group: &SchottkyGroup,
    spec: &BoxSpec,
    nu: &AtomicMeasure,
    delta: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<WeightedSample>, MeasureError> {
    let windows = atom_windows(spec, nu);
    if windows.is_empty() || count == 0 {
        return Err(MeasureError::ZeroAcceptance);
    }
    let rho = spec.rho;
    let mut cdf = Vec::with_capacity(windows.len());
    let mut acc = 0.0;
    for w in &windows {
        acc += w.weight;
        cdf.push(acc);
    }
    let total_w = acc;
    let volume = 2.0 * rho * std::f64::consts::PI * rho * rho;
    let n_chunks = count.div_ceil(CHUNK);
    let parts = ordered_map(n_chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, c as u64));
        let len = CHUNK.min(count - c * CHUNK);
        let mut out = Vec::with_capacity(len);
        let mut rejected = 0usize;
        for _ in 0..len {
            let u = rng.random::<f64>() * total_w;
            let w = &windows[cdf.partition_point(|&x| x <= u).min(windows.len() - 1)];
            let theta = rng.random_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
            let s = w.s_mid + rng.random_range(-rho..rho);
            let rad = rho * rng.random::<f64>().sqrt();
            let ang = rng.random_range(0.0..std::f64::consts::TAU);
            let center = -s.exp() * Complex64::from_polar(1.0, 2.0 * theta) * w.ratio;
            let z = center + Complex64::from_polar(rad, ang);
            let g = Mobius::k_to(nu.atoms[w.index].xi) * Mobius::m(theta) * Mobius::a(s) * Mobius::n(z);
            match group.reduce_rep(&g) {
                Ok(rep) if spec.contains(&rep) => {
                    let weight = br_density_kan(s, delta) * total_w * volume / count as f64;
                    out.push(WeightedSample { frame: FramePoint { rep }, weight });
                }
                _ => rejected += 1,
            }
        }
        (out, rejected)
    });
    let mut samples = Vec::with_capacity(count);
    let mut rejected = 0;
    for (s, r) in parts {
        samples.extend(s);
        rejected += r;
    }
    if samples.is_empty() {
        return Err(MeasureError::ZeroAcceptance);
    }
    if rejected > 0 {
        log::warn!("{rejected} BR proposals fell outside the box");
    }
    debug_assert!(br_box_mass(spec, nu, delta) > 0.0);
    Ok(samples)
}

/// Samples of m^BMS with Hopf time in `t_range`: endpoints drawn from ν in
/// proportion to weight, t and θ uniform, frames reduced into X.
pub fn sample_bms(
    group: &SchottkyGroup,
    nu: &AtomicMeasure,
    delta: f64,
    count: usize,
    seed: u64,
    t_range: (f64, f64),
) -> Result<Vec<WeightedSample>, MeasureError> {
    if nu.len() < 2 || count == 0 {
        return Err(MeasureError::ZeroAcceptance);
    }
    let cdf = nu.cdf();
    let total = nu.total_mass();
    // proposal mass of ordered pairs with i ≠ j
    let pair_mass = total * total - nu.atoms.iter().map(|a| a.weight * a.weight).sum::<f64>();
    let span = t_range.1 - t_range.0;
    let n_chunks = count.div_ceil(CHUNK);
    let parts = ordered_map(n_chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, c as u64));
        let len = CHUNK.min(count - c * CHUNK);
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let (i, j) = loop {
                let i = nu.draw(&cdf, &mut rng);
                let j = nu.draw(&cdf, &mut rng);
                if i != j {
                    break (i, j);
                }
            };
            let t = t_range.0 + span * rng.random::<f64>();
            let theta = rng.random_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
            let (plus, minus): (BoundaryPoint, BoundaryPoint) = (nu.atoms[i].xi, nu.atoms[j].xi);
            let Ok(g) = hopf_frame(plus, minus, t, theta) else { continue };
            let weight = bms_density(&g, delta) * pair_mass * span / count as f64;
            if let Ok(rep) = group.reduce_rep(&g) {
                out.push(WeightedSample { frame: FramePoint { rep }, weight });
            }
        }
        out
    });
    Ok(parts.into_iter().flatten().collect())
}

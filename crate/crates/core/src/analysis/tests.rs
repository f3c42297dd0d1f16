use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dynamics::TimeSeries;
use crate::hyperbolic::{BoundaryPoint, Mobius};
use crate::measures::FramePoint;
use crate::patterson::{Atom, AtomicMeasure, Provenance};
use crate::schottky::{Disk, DiskPair, SchottkyGroup};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn measure(points: &[(Complex64, f64)]) -> AtomicMeasure {
    AtomicMeasure::new(
        points.iter().map(|&(z, weight)| Atom { xi: BoundaryPoint::Finite(z), weight }).collect(),
        Provenance::default(),
    )
}

fn cloud(n: usize, seed: u64) -> AtomicMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(Complex64, f64)> =
        (0..n).map(|_| (c(rng.random::<f64>(), rng.random::<f64>()), rng.random::<f64>() / n as f64)).collect();
    measure(&pts)
}

#[test]
fn energy_of_two_atoms() {
    let mu = measure(&[(c(0.0, 0.0), 0.5), (c(1.0, 0.0), 0.5)]);
    assert_relative_eq!(alpha_energy_exact(&mu, 0.7), 0.5, epsilon = 1e-15);
    // distance 2 scales by 2^{−α}
    let mu = measure(&[(c(0.0, 0.0), 0.5), (c(0.0, 2.0), 0.5)]);
    assert_relative_eq!(alpha_energy_exact(&mu, 1.0), 0.25, epsilon = 1e-15);
}

#[test]
fn tree_energy_matches_direct_sum() {
    let mu = cloud(3000, 4);
    for alpha in [0.5, 1.2, 1.8] {
        let exact = alpha_energy_exact(&mu, alpha);
        let tree = alpha_energy_tree(&mu, alpha, TREE_THETA);
        assert_relative_eq!(tree, exact, max_relative = 2e-3);
    }
}

#[test]
fn energy_uses_exact_sum_below_limit() {
    let mu = cloud(500, 1);
    assert_eq!(alpha_energy(&mu, 1.0), alpha_energy_exact(&mu, 1.0));
}

#[test]
fn uniform_segment_has_dimension_one() {
    let pts: Vec<f64> = (0..100_000).map(|i| i as f64 / 100_000.0).collect();
    let radii: Vec<f64> = (0..8).map(|k| 1e-2 * 0.5f64.powi(k)).collect();
    let d = box_dimension_1d(&pts, &radii).unwrap();
    assert_relative_eq!(d.slope, 1.0, max_relative = 1e-2);
    let planar: Vec<Complex64> = pts.iter().map(|&x| c(x, 2.0 * x)).collect();
    assert_relative_eq!(box_dimension(&planar, &radii).unwrap().slope, 1.0, max_relative = 2e-2);
}

#[test]
fn filled_square_has_dimension_two() {
    let n = 400;
    let pts: Vec<Complex64> =
        (0..n * n).map(|k| c((k % n) as f64 / n as f64, (k / n) as f64 / n as f64)).collect();
    let radii: Vec<f64> = (0..5).map(|k| 0.05 * 0.5f64.powi(k)).collect();
    assert_relative_eq!(box_dimension(&pts, &radii).unwrap().slope, 2.0, max_relative = 2e-2);
}

#[test]
fn middle_thirds_cantor_set() {
    // oracle: log 2 / log 3
    let mut pts = vec![0.0f64];
    for k in 1..=14 {
        let step = 2.0 * 3f64.powi(-k);
        pts = pts.iter().flat_map(|&x| [x, x + step]).collect();
    }
    let radii: Vec<f64> = (3..9).map(|k| 3f64.powi(-k) * 1.01).collect();
    let d = box_dimension_1d(&pts, &radii).unwrap();
    assert!((d.slope - 2f64.ln() / 3f64.ln()).abs() < 0.02, "{}", d.slope);
}

#[test]
fn dimension_needs_points() {
    assert!(box_dimension(&[c(0.0, 0.0)], &[0.1, 0.01]).is_err());
    assert!(box_dimension_1d(&[0.0, 1.0], &[0.5]).is_err());
}

#[test]
fn projection_coordinates() {
    let mu = measure(&[(c(1.0, 2.0), 1.0)]);
    assert_relative_eq!(project(&mu, 0.0).atoms[0].0, 2.0, epsilon = 1e-15);
    assert_relative_eq!(project(&mu, std::f64::consts::FRAC_PI_2).atoms[0].0, -1.0, epsilon = 1e-15);
}

#[test]
fn degenerate_projection_uses_one_bin() {
    // every atom on the real axis projects to 0 at θ = 0
    let mu = measure(&[(c(0.0, 0.0), 0.3), (c(1.0, 0.0), 0.7)]);
    let h = projected_density(&mu, 0.0, 16);
    assert_eq!(h.mass[0], 1.0);
    assert_eq!(h.occupancy(), 1.0 / 16.0);
}

#[test]
fn window_with_constant_function() {
    // ψ ≡ 1: inner = 2rT, outer = 2T, good ⇔ r ≤ 1/2
    let big_t = 40.0;
    let n = 800;
    let times: Vec<f64> = (0..=n).map(|k| -big_t + 2.0 * big_t * k as f64 / n as f64).collect();
    let series = TimeSeries { values: vec![1.0; times.len()], times, dt: 2.0 * big_t / n as f64 };
    for r in [0.1, 0.25, 0.5, 0.6, 0.9] {
        let w = window_from_series(&series, big_t, r).unwrap();
        assert_relative_eq!(w.inner, 2.0 * r * big_t, max_relative = 1e-12);
        assert_relative_eq!(w.outer, 2.0 * big_t, max_relative = 1e-12);
        assert_eq!(w.good, r <= 0.5);
    }
    assert!(window_from_series(&series, big_t, 1.0).is_err());
}

#[test]
fn contraction_of_ratio_sequences() {
    assert!(contracting(&[1.0, 1.5, 1.7, 1.75]));
    assert!(!contracting(&[1.0, 1.5, 1.7, 2.2]));
    assert!(contracting(&[3.0, 2.0]));
}

fn fuchsian() -> SchottkyGroup {
    SchottkyGroup::build(&[
        DiskPair { from: Disk::new(c(-4.5, 0.0), 1.0), to: Disk::new(c(4.5, 0.0), 1.0) },
        DiskPair { from: Disk::new(c(-1.5, 0.0), 1.0), to: Disk::new(c(1.5, 0.0), 1.0) },
    ])
    .unwrap()
}

fn height(x: &FramePoint) -> f64 {
    1.0 / (1.0 + x.point().t)
}

fn real_part(x: &FramePoint) -> f64 {
    1.0 + x.point().z.re.cos()
}

#[test]
fn hopf_ratio_is_linear_and_scale_free() {
    let g = fuchsian();
    let x = FramePoint::from_element(&g, &(Mobius::a(0.3) * Mobius::m(0.4))).unwrap();
    let grid = [5.0, 10.0, 20.0];
    let base = hopf_ratio(&g, &x, height, real_part, &grid, 0.05).unwrap();
    let scaled = hopf_ratio(&g, &x, |y| 3.0 * height(y), |y| 2.0 * real_part(y), &grid, 0.05).unwrap();
    let sum = hopf_ratio(&g, &x, |y| height(y) + real_part(y), real_part, &grid, 0.05).unwrap();
    for k in 0..grid.len() {
        let (b, s, t) = (base[k].unwrap(), scaled[k].unwrap(), sum[k].unwrap());
        assert_relative_eq!(s, 1.5 * b, max_relative = 1e-12);
        assert_relative_eq!(t, b + 1.0, max_relative = 1e-12);
    }
    assert!(hopf_ratio(&g, &x, height, |_| 0.0, &grid, 0.05).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projection_keeps_mass(theta in -3.2..3.2f64, seed in 0u64..1000) {
        let mu = cloud(200, seed);
        let p = project(&mu, theta);
        prop_assert!((p.total_mass() - mu.total_mass()).abs() < 1e-12);
        let h = histogram(&p, 32);
        prop_assert!((h.integral() - mu.total_mass()).abs() < 1e-12);
    }

    #[test]
    fn energy_is_translation_invariant(dx in -5.0..5.0f64, dy in -5.0..5.0f64, alpha in 0.2..1.9f64) {
        let mu = cloud(100, 7);
        let moved = measure(&mu.finite_atoms().map(|(z, w)| (z + c(dx, dy), w)).collect::<Vec<_>>());
        let (a, b) = (alpha_energy_exact(&mu, alpha), alpha_energy_exact(&moved, alpha));
        prop_assert!((a - b).abs() <= 1e-9 * a);
    }
}

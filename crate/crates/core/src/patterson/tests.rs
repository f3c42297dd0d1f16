use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::hyperbolic::{BoundaryPoint, H3Point};
use crate::schottky::{CyclicGroup, Disk, DiskPair, SchottkyGroup};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn symmetric() -> SchottkyGroup {
    SchottkyGroup::build(&[
        DiskPair { from: Disk::new(c(-2.0, 0.0), 0.5), to: Disk::new(c(2.0, 0.0), 0.5) },
        DiskPair { from: Disk::new(c(0.0, -2.0), 0.5), to: Disk::new(c(0.0, 2.0), 0.5) },
    ])
    .unwrap()
}

fn fuchsian() -> SchottkyGroup {
    SchottkyGroup::build(&[
        DiskPair { from: Disk::new(c(-4.5, 0.0), 1.0), to: Disk::new(c(4.5, 0.0), 1.0) },
        DiskPair { from: Disk::new(c(-1.5, 0.0), 1.0), to: Disk::new(c(1.5, 0.0), 1.0) },
    ])
    .unwrap()
}

#[test]
fn cyclic_series_is_geometric() {
    // g^n moves o by exactly n·ℓ
    let (ell, s, len) = (0.7, 1.3, 12);
    let oracle: f64 = 1.0 + 2.0 * (1..=len).map(|n| (-s * ell * n as f64).exp()).sum::<f64>();
    let got = poincare_partial(&CyclicGroup::new(ell), s, len);
    assert!((got - oracle).abs() < 1e-12, "{got} vs {oracle}");
}

#[test]
fn histogram_sum_matches_direct_sum() {
    let g = symmetric();
    let stats = OrbitStats::collect(&g, 6);
    let direct = poincare_partial(&g, 0.4, 6);
    let binned = stats.partial_sum(0.4, 6);
    assert!((direct - binned).abs() / direct < 1e-3);
    let n: u64 = stats.levels.iter().map(|h| h.total).sum();
    assert_eq!(n as u128, count_reduced_words(4, 6));
}

fn count_reduced_words(n: usize, len: usize) -> u128 {
    crate::schottky::count_reduced_words(n, len)
}

#[test]
fn two_estimators_agree() {
    let g = symmetric();
    let stats = OrbitStats::collect(&g, 10);
    let a = estimate_delta_series_from(&stats, 1e-9).unwrap();
    let b = estimate_delta_orbit_from(&stats).unwrap();
    assert!(a.delta > 0.2 && a.delta < 0.4);
    assert!((a.delta - b.delta).abs() < 0.02, "{a:?} {b:?}");
}

#[test]
fn series_at_delta_sits_between_divergence_and_convergence() {
    let g = symmetric();
    let d = estimate_delta_series(&g, 9, 1e-9).unwrap().delta;
    let growth = |s: f64| poincare_partial(&g, s, 8) - poincare_partial(&g, s, 7);
    assert!(growth(d - 0.1) > growth(d) && growth(d) > growth(d + 0.1));
}

#[test]
fn ps_from_origin_has_unit_mass() {
    let g = symmetric();
    let nu = build_ps(&g, &H3Point::ORIGIN, 0.31, 6, 0, PsOptions::default()).unwrap();
    assert!((nu.total_mass() - 1.0).abs() < 1e-12);
    assert!(!nu.provenance.sampled);
    // words of length 4..=6
    assert_eq!(nu.len() as u128, count_reduced_words(4, 6) - count_reduced_words(4, 3));
}

#[test]
fn sampled_ps_approximates_exact() {
    let g = symmetric();
    let exact = build_ps(&g, &H3Point::ORIGIN, 0.31, 7, 0, PsOptions::default()).unwrap();
    let sampled = build_ps(&g, &H3Point::ORIGIN, 0.31, 7, 5, PsOptions { band: 2, max_atoms: 2000 }).unwrap();
    assert!(sampled.provenance.sampled);
    assert!((sampled.total_mass() - 1.0).abs() < 1e-9);
    let q = c(2.0, 0.0);
    let (a, b) = (exact.ball_mass(q, 0.6), sampled.ball_mass(q, 0.6));
    assert!((a - b).abs() < 0.05, "{a} {b}");
}

#[test]
fn fuchsian_atoms_are_real() {
    let nu = build_ps(&fuchsian(), &H3Point::ORIGIN, 0.5, 6, 0, PsOptions::default()).unwrap();
    for (z, _) in nu.finite_atoms() {
        assert!(z.im.abs() < 1e-12);
    }
}

#[test]
fn atom_residual_vanishes_at_the_atom() {
    let x = H3Point::ORIGIN;
    let y = H3Point::new(c(0.3, -0.2), 1.7).unwrap();
    let p = H3Point::new(c(1.0, 0.5), 1e-7).unwrap();
    let r = atom_residual(&x, &y, &p, BoundaryPoint::Finite(c(1.0, 0.5)), 1.0).unwrap();
    assert!(r < 1e-6, "{r}");
}

#[test]
fn conformality_improves_with_length() {
    let g = symmetric();
    let y = H3Point::new(c(0.2, -0.1), 1.3).unwrap();
    let r6 = conformal_residual(&g, &H3Point::ORIGIN, &y, 0.3, 6).unwrap();
    let r9 = conformal_residual(&g, &H3Point::ORIGIN, &y, 0.3, 9).unwrap();
    assert!(r9.median < r6.median && r9.median < 1e-6);
}

#[test]
fn slope_of_a_line() {
    let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
    assert!((least_squares_slope(&xs, &ys) - 2.5).abs() < 1e-12);
}

#[test]
fn radii_and_quantiles() {
    let r = log_radii(0.01, 1.0, 5);
    assert!((r[0] - 0.01).abs() < 1e-15 && (r[4] - 1.0).abs() < 1e-12 && (r[2] - 0.1).abs() < 1e-12);
    assert_eq!(quantile(&[3.0, 1.0, 2.0], 0.5), 2.0);
}

#[test]
fn shadow_slope_of_uniform_atoms() {
    // equal atoms on a fine grid of the unit square: mass ∝ r²
    let mut atoms = Vec::new();
    let n = 200;
    for i in 0..n {
        for j in 0..n {
            let z = c((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
            atoms.push(Atom { xi: BoundaryPoint::Finite(z), weight: 1.0 });
        }
    }
    let mu = AtomicMeasure::new(atoms, Provenance::default());
    let fit = shadow_exponent(&mu, &[c(0.5, 0.5), c(0.4, 0.6)], &log_radii(0.05, 0.3, 8)).unwrap();
    assert!((fit.slope - 2.0).abs() < 0.05, "{}", fit.slope);
}

#[test]
fn nonfocusing_on_a_line() {
    let atoms = (0..100).map(|i| Atom { xi: BoundaryPoint::Finite(c(i as f64 * 0.01 - 0.5, 0.0)), weight: 1.0 }).collect();
    let mu = AtomicMeasure::new(atoms, Provenance::default());
    assert_eq!(nonfocusing_fraction(&mu, c(0.0, 0.0), 10.0, 0.3).unwrap(), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn series_decreases_in_s(s in 0.05f64..1.5, ds in 0.01f64..0.5) {
        let g = CyclicGroup::new(0.9);
        prop_assert!(poincare_partial(&g, s + ds, 8) < poincare_partial(&g, s, 8));
    }

    #[test]
    fn coarsening_keeps_mass(h in 0.01f64..0.5) {
        let nu = build_ps(&symmetric(), &H3Point::ORIGIN, 0.3, 5, 0, PsOptions::default()).unwrap();
        prop_assert!((nu.coarsen(h).total_mass() - nu.total_mass()).abs() < 1e-12);
    }
}

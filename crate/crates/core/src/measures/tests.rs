use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::hyperbolic::{hyp_dist, BoundaryPoint, H3Point, Mobius};
use crate::patterson::{build_ps, Atom, AtomicMeasure, PsOptions, Provenance};
use crate::schottky::{Disk, DiskPair, SchottkyGroup};

const DELTA: f64 = 0.3;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn group() -> SchottkyGroup {
    SchottkyGroup::build(&[
        DiskPair { from: Disk::new(c(-2.0, 0.0), 0.5), to: Disk::new(c(2.0, 0.0), 0.5) },
        DiskPair { from: Disk::new(c(0.0, -2.0), 0.5), to: Disk::new(c(0.0, 2.0), 0.5) },
    ])
    .unwrap()
}

fn nu(g: &SchottkyGroup) -> AtomicMeasure {
    build_ps(g, &H3Point::ORIGIN, DELTA, 6, 0, PsOptions::default()).unwrap()
}

fn nearest(nu: &AtomicMeasure, z: Complex64) -> Complex64 {
    nu.finite_atoms().map(|a| a.0).min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm())).unwrap()
}

/// Box at Hopf time 0 on the geodesic between the atoms nearest 2 and −2.
fn reference(g: &SchottkyGroup, nu: &AtomicMeasure, rho: f64) -> BoxSpec {
    let plus = BoundaryPoint::Finite(nearest(nu, c(2.0, 0.0)));
    let minus = BoundaryPoint::Finite(nearest(nu, c(-2.0, 0.0)));
    BoxSpec::new(g, FramePoint::from_hopf(g, plus, minus, 0.0, 0.0).unwrap(), rho).unwrap()
}

fn dirac(xi: Complex64) -> AtomicMeasure {
    AtomicMeasure::new(vec![Atom { xi: BoundaryPoint::Finite(xi), weight: 1.0 }], Provenance::default())
}

#[test]
fn br_density_value() {
    assert_relative_eq!(br_density_kan(1.3, 1.0), 0.272_531_793_034_012_6, epsilon = 1e-15);
    assert_eq!(br_density_kan(0.0, 1.7), 1.0);
}

#[test]
fn bms_density_at_identity_is_one() {
    assert_relative_eq!(bms_density(&Mobius::IDENTITY, 1.2), 1.0, epsilon = 1e-15);
}

#[test]
fn gromov_kernel_of_antipodes() {
    // 0 and ∞ are antipodal; ±1 are too, with |ξ−η|² = 4
    assert_relative_eq!(gromov_kernel(c(1.0, 0.0), c(-1.0, 0.0)), 1.0, epsilon = 1e-15);
    assert_relative_eq!(gromov_kernel(c(0.0, 1.0), c(0.0, -1.0)), 1.0, epsilon = 1e-15);
}

#[test]
fn geodesic_length_between_two_hemispheres() {
    // oracle: arclength t-grid over the part of the semicircle from −2 to 2 outside both hemispheres
    let disks = [Disk::new(c(2.0, 0.0), 1.0), Disk::new(c(-2.0, 0.0), 1.0)];
    let n = 400_000;
    let mut len = 0.0;
    for i in 0..n {
        let phi = std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
        let p = H3Point { z: c(2.0 * phi.cos(), 0.0), t: 2.0 * phi.sin() };
        if disks.iter().all(|d| d.hemisphere_power(&p) > 0.0) {
            len += std::f64::consts::PI / n as f64 / phi.sin();
        }
    }
    let got = geodesic_length_outside(&disks, c(-2.0, 0.0), c(2.0, 0.0));
    assert!((got - len).abs() < 1e-4, "{got} vs {len}");
    assert!(geodesic_length_outside(&disks[..1], c(-2.0, 0.0), c(2.0, 0.0)).is_infinite());
}

#[test]
fn single_atom_phi0() {
    // P(0, (0, 2))^{3/2} = (2/4)^{3/2}
    let p = H3Point::new(c(0.0, 0.0), 2.0).unwrap();
    assert_relative_eq!(phi0(&dirac(c(0.0, 0.0)), 1.5, &p), 0.353_553_390_593_273_8, epsilon = 1e-15);
}

#[test]
fn single_atom_is_an_eigenfunction() {
    let m = dirac(c(0.3, -0.4));
    let p = H3Point::new(c(0.1, 0.2), 0.8).unwrap();
    for delta in [0.4, 1.0, 1.6] {
        assert!(laplacian_residual(&m, delta, &p, 1e-3) < 1e-5);
        let r = richardson_ratio(&m, delta, &p, 2e-2);
        assert!((3.5..=4.5).contains(&r), "ratio {r}");
    }
}

#[test]
fn laplacian_of_power_of_height() {
    // Δ t^a = a(a − 2) t^a
    let p = H3Point::new(c(0.0, 0.0), 1.7).unwrap();
    let a = 0.6;
    let lap = hyperbolic_laplacian(|q: &H3Point| q.t.powf(a), &p, 1e-3);
    assert_relative_eq!(lap, a * (a - 2.0) * p.t.powf(a), max_relative = 1e-5);
}

#[test]
fn coarse_field_matches_direct_sum() {
    let g = group();
    let m = nu(&g);
    let p = H3Point::new(c(0.4, 0.1), 0.9).unwrap();
    assert_relative_eq!(Phi0Field::new(&m, DELTA).eval(&p), phi0(&m, DELTA, &p), max_relative = 1e-12);
    assert_relative_eq!(Phi0Field::coarse(&m, DELTA, 0.05).eval(&p), phi0(&m, DELTA, &p), max_relative = 1e-2);
}

#[test]
fn normalized_bms_has_unit_mass() {
    let g = group();
    let mut m = nu(&g);
    let k = normalize_bms(&g, &mut m, DELTA, 0.05).unwrap();
    assert!(k > 0.0);
    assert_relative_eq!(bms_total_mass(&g, &m, DELTA, 0.05).unwrap(), 1.0, max_relative = 1e-9);
}

#[test]
fn br_box_mass_against_quadrature() {
    // oracle: per admissible atom, midpoint rule over box coordinates (s, z, θ),
    // with the KAN height of k_ξ⁻¹ x₀ n⁻_w a_s n_z m_θ read off the matrix
    let g = group();
    let m = nu(&g);
    let rho = 0.3;
    let spec = reference(&g, &m, rho);
    let x0 = spec.center.rep;
    let inv = x0.inverse();
    let (ns, nz, nt) = (64, 3, 3);
    let mut total = 0.0;
    let mut admissible = 0;
    for a in &m.atoms {
        let BoundaryPoint::Finite(w) = inv.apply_boundary(a.xi) else { continue };
        if w.norm() >= rho {
            continue;
        }
        admissible += 1;
        let k_inv = Mobius::k_to(a.xi).inverse();
        let mut acc = 0.0;
        for i in 0..ns {
            let s = -rho + 2.0 * rho * (i as f64 + 0.5) / ns as f64;
            for j in 0..nz {
                let z = Complex64::from_polar(0.5 * rho, j as f64);
                for l in 0..nt {
                    let theta = -1.0 + l as f64;
                    let h = k_inv * x0 * Mobius::n_minus(w) * Mobius::a(s) * Mobius::n(z) * Mobius::m(theta);
                    assert!(h.b.norm() < 1e-9);
                    let s_kan = 2.0 * h.a.norm().ln();
                    acc += (-DELTA * s_kan).exp();
                }
            }
        }
        let vol = 2.0 * rho * std::f64::consts::PI * rho * rho;
        total += a.weight * vol * acc / (ns * nz * nt) as f64;
    }
    assert!(admissible > 0);
    assert_relative_eq!(br_box_mass(&spec, &m, DELTA), total, max_relative = 1e-4);
}

#[test]
fn br_sampler_is_seeded_and_unbiased() {
    let g = group();
    let m = nu(&g);
    let spec = reference(&g, &m, 0.3);
    let a = sample_br_box(&g, &spec, &m, DELTA, 3000, 9).unwrap();
    let b = sample_br_box(&g, &spec, &m, DELTA, 3000, 9).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|x| spec.contains(&x.frame.rep)));
    let sum: f64 = a.iter().map(|x| x.weight).sum();
    assert_relative_eq!(sum, br_box_mass(&spec, &m, DELTA), max_relative = 0.05);
}

#[test]
fn br_sampler_without_admissible_atoms() {
    let g = group();
    let m = nu(&g);
    let spec = reference(&g, &m, 0.3);
    let far = dirac(nearest(&m, c(0.0, 2.0)));
    assert!(matches!(sample_br_box(&g, &spec, &far, DELTA, 10, 0), Err(crate::error::MeasureError::ZeroAcceptance)));
}

#[test]
fn box_rejects_bad_radius() {
    let g = group();
    let m = nu(&g);
    let x0 = reference(&g, &m, 0.3).center;
    assert!(BoxSpec::new(&g, x0, 1.5).is_err());
    assert!(BoxSpec::new(&g, x0, 0.0).is_err());
}

#[test]
fn bump_integral_in_one_lift() {
    // at s = 0 and x = x₀ the leaf meets the box in the disk |z| < ρ
    let g = group();
    let m = nu(&g);
    let spec = reference(&g, &m, 0.3);
    let psi = LeafBump { center: c(0.0, 0.0), radius: 0.2 };
    let v = conditional_leaf(&g, &spec, 1.0, DELTA, &spec.center, 0.0, &psi, 200).unwrap();
    // oracle: ∫ bump = π r² ∫₀¹ e^{1 − 1/(1−v)} dv, Simpson on a fine grid
    let n = 200_000;
    let f = |v: f64| if v >= 1.0 { 0.0 } else { (1.0 - 1.0 / (1.0 - v)).exp() };
    let mut simpson = f(0.0) + f(1.0);
    for i in 1..n {
        simpson += f(i as f64 / n as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let oracle = std::f64::consts::PI * 0.04 * simpson / (3.0 * n as f64);
    assert_eq!(v.hits, 1);
    assert_relative_eq!(v.integral, oracle, max_relative = 1e-3);
}

#[test]
fn conditional_leaf_matches_grid() {
    let g = group();
    let m = nu(&g);
    let spec = reference(&g, &m, 0.3);
    let br = br_box_mass(&spec, &m, DELTA);
    let x = FramePoint { rep: spec.center.rep * Mobius::n_minus(c(0.05, -0.02)) * Mobius::m(0.3) };
    let psi = LeafBump { center: c(0.1, 0.0), radius: 0.3 };
    let s = 0.1;
    let fast = conditional_leaf(&g, &spec, br, DELTA, &x, s, &psi, 64).unwrap();
    let grid = conditional_leaf_grid(&g, &spec, br, DELTA, &x, s, &psi, 0.004).unwrap();
    assert!(fast.hits >= 1);
    assert_relative_eq!(fast.value, grid, max_relative = 0.02);
}

#[test]
fn leaf_ps_measure_of_a_dirac() {
    // a single atom ξ = x n_z(∞) contributes ψ(z) e^{δβ}
    let x = FramePoint { rep: Mobius::a(0.2) * Mobius::m(0.4) };
    let z = c(0.3, 0.1);
    let xi = x.rep.mul_raw(&Mobius::n(z)).apply_boundary(BoundaryPoint::Infinity).finite().unwrap();
    let psi = LeafBump { center: c(0.0, 0.0), radius: 1.0 };
    let got = leaf_ps_measure(&dirac(xi), DELTA, &x, &psi);
    assert_relative_eq!(got, psi.eval(z) * leaf_ps_weight(&x.rep, z, DELTA), max_relative = 1e-10);
}

#[test]
fn hopf_frame_has_requested_time_and_endpoints() {
    let (p, m) = (BoundaryPoint::Finite(c(1.0, 0.5)), BoundaryPoint::Finite(c(-0.7, 0.2)));
    let g = hopf_frame(p, m, 0.37, 0.8).unwrap();
    assert_relative_eq!(hopf_time(&g), 0.37, epsilon = 1e-12);
    let (gp, gm) = crate::hyperbolic::frame_endpoints(&g);
    assert!(gp.chordal(p) < 1e-12 && gm.chordal(m) < 1e-12);
}

#[test]
fn bms_box_mass_is_positive_on_the_reference_box() {
    let g = group();
    let m = nu(&g);
    let spec = reference(&g, &m, 0.3);
    assert!(bms_box_mass(&spec, &m.coarsen(0.02), DELTA) > 0.0);
}

fn arb_mobius() -> impl Strategy<Value = Mobius> {
    (-2.0..2.0f64, -2.0..2.0f64, -1.5..1.5f64, -1.5..1.5f64, -3.0..3.0f64)
        .prop_map(|(x, y, s, u, th)| Mobius::n_minus(c(x, y)) * Mobius::a(s) * Mobius::n(c(u, -u)) * Mobius::m(th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lebesgue_leaf_density_is_one(y in arb_mobius(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        prop_assume!(re * re + im * im > 1e-3);
        prop_assert!((leaf_leb_density(&y, c(re, im)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bms_density_is_flow_invariant(u in arb_mobius(), t in -2.0..2.0f64, delta in 0.1..1.9f64) {
        let a = bms_density(&u, delta);
        let b = bms_density(&(u * Mobius::a(t)), delta);
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn bms_density_is_a_power(u in arb_mobius(), delta in 0.1..1.0f64) {
        let one = bms_density(&u, delta);
        prop_assert!((bms_density(&u, 2.0 * delta) - one * one).abs() <= 1e-9 * one * one);
    }

    #[test]
    fn poisson_power_is_an_eigenfunction(x in -1.0..1.0f64, y in -1.0..1.0f64, t in 0.5..2.0f64, delta in 0.2..1.8f64) {
        let p = H3Point::new(c(x, y), t).unwrap();
        prop_assert!(laplacian_residual(&dirac(c(0.2, -0.1)), delta, &p, 1e-3) < 1e-4);
    }

    #[test]
    fn hopf_time_shifts_under_the_flow(u in arb_mobius(), t in -2.0..2.0f64) {
        // a_t moves away from g⁻, lowering the Hopf time by t
        let d = hopf_time(&u) - hopf_time(&(u * Mobius::a(t)));
        prop_assert!((d - t).abs() < 1e-9);
        prop_assert!(hyp_dist(&u.apply_origin(), &(u * Mobius::a(t)).apply_origin()) <= t.abs() + 1e-9);
    }
}

use super::*;
use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn arb_complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(x, y)| c(x, y))
}

fn arb_mobius() -> impl Strategy<Value = Mobius> {
    (arb_complex(2.0), arb_complex(2.0), arb_complex(2.0), arb_complex(2.0))
        .prop_filter_map("singular", |(a, b, cc, d)| {
            let det = a * d - b * cc;
            if det.norm() > 0.05 { Mobius::new(a, b, cc, d).ok() } else { None }
        })
}

fn arb_point() -> impl Strategy<Value = H3Point> {
    (arb_complex(3.0), -3.0f64..3.0).prop_map(|(z, lt)| H3Point { z, t: lt.exp() })
}

#[test]
fn a_s_moves_origin_up() {
    let p = Mobius::a(0.7).apply_origin();
    assert_relative_eq!(p.t, 0.7f64.exp(), epsilon = 1e-15);
    assert_eq!(p.z, c(0.0, 0.0));
}

#[test]
fn n_z_orbit_of_origin() {
    // oracle: n_z · (0,1) = (z̄/(1+|z|²), 1/(1+|z|²))
    let z = c(0.3, -1.2);
    let p = Mobius::n(z).apply_h3(&H3Point::ORIGIN);
    let q = 1.0 + z.norm_sqr();
    assert_relative_eq!(p.t, 1.0 / q, epsilon = 1e-15);
    assert!((p.z - z.conj() / q).norm() < 1e-15);
}

#[test]
fn distance_examples() {
    let o = H3Point::ORIGIN;
    assert_relative_eq!(hyp_dist(&o, &H3Point { z: c(0.0, 0.0), t: 1f64.exp() }), 1.0, epsilon = 1e-14);
    assert_relative_eq!(hyp_dist(&o, &H3Point { z: c(1.0, 0.0), t: 1.0 }), 1.5f64.acosh(), epsilon = 1e-14);
    assert_eq!(hyp_dist(&o, &o), 0.0);
}

#[test]
fn busemann_vertical_example() {
    let o = H3Point::ORIGIN;
    let y = H3Point { z: c(0.0, 0.0), t: 1f64.exp() };
    let b = busemann(BoundaryPoint::Infinity, &o, &y).unwrap();
    assert!((b - 1.0).abs() < 1e-9, "{b}");
}

#[test]
fn busemann_probe_matches_closed_form_at_finite_points() {
    let xi = BoundaryPoint::Finite(c(0.4, -0.9));
    let x = H3Point { z: c(1.0, 0.5), t: 0.3 };
    let y = H3Point { z: c(-2.0, 0.1), t: 2.5 };
    let probe = busemann(xi, &x, &y).unwrap();
    assert!((probe - busemann_closed(xi, &x, &y)).abs() < 1e-9);
}

#[test]
fn boundary_action_handles_poles() {
    let g = Mobius::new(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
    assert_eq!(g.apply_boundary(BoundaryPoint::Finite(c(1.0, 0.0))), BoundaryPoint::Infinity);
    match g.apply_boundary(BoundaryPoint::Infinity) {
        BoundaryPoint::Finite(z) => assert!((z - c(1.0, 0.0)).norm() < 1e-15),
        BoundaryPoint::Infinity => panic!("∞ should map to a/c"),
    }
}

#[test]
fn canonical_sign_is_stable() {
    let g = Mobius::new(c(-1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
    assert!(g.a.re > 0.0);
    let neg = Mobius { a: -g.a, b: -g.b, c: -g.c, d: -g.d };
    assert_eq!(neg.canonical(), g);
}

#[test]
fn frame_endpoints_of_identity() {
    let (p, m) = frame_endpoints(&Mobius::IDENTITY);
    assert_eq!(p, BoundaryPoint::Infinity);
    assert_eq!(m, BoundaryPoint::Finite(c(0.0, 0.0)));
}

#[test]
fn box_coordinates_examples() {
    assert_eq!(decompose_box(&Mobius::IDENTITY).unwrap(), BoxCoords::ZERO);
    let w = c(0.25, -0.1);
    let b = decompose_box(&Mobius::n_minus(w)).unwrap();
    assert!((b.w - w).norm() < 1e-15 && b.s.abs() < 1e-15 && b.z.norm() < 1e-15);
    let target = BoxCoords { w: c(0.1, 0.0), s: 0.05, z: c(0.0, 0.2), theta: 0.3 };
    let back = decompose_box(&target.compose()).unwrap();
    assert!((back.w - target.w).norm() < 1e-12);
    assert!((back.s - target.s).abs() < 1e-12);
    assert!((back.z - target.z).norm() < 1e-12);
    assert!((back.theta - target.theta).abs() < 1e-12);
}

#[test]
fn box_chart_rejects_d_zero() {
    let g = Mobius::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)).unwrap();
    assert!(matches!(decompose_box(&g), Err(crate::error::GeometryError::OutsideChart(_))));
}

#[test]
fn displacement_matches_distance() {
    let g = Mobius::new(c(1.3, 0.2), c(0.4, -1.0), c(0.1, 0.7), c(0.9, 0.3)).unwrap();
    assert_relative_eq!(g.displacement(), hyp_dist(&H3Point::ORIGIN, &g.apply_origin()), epsilon = 1e-12);
}

proptest! {
    #[test]
    fn action_is_isometric(g in arb_mobius(), p in arb_point(), q in arb_point()) {
        let d0 = hyp_dist(&p, &q);
        let d1 = hyp_dist(&g.apply_h3(&p), &g.apply_h3(&q));
        prop_assert!((d0 - d1).abs() <= 1e-9 * (1.0 + d0));
    }

    #[test]
    fn action_is_a_homomorphism(g in arb_mobius(), h in arb_mobius(), p in arb_point()) {
        let a = (g * h).apply_h3(&p);
        let b = g.apply_h3(&h.apply_h3(&p));
        prop_assert!(hyp_dist(&a, &b) < 1e-8);
    }

    #[test]
    fn flow_conjugation_identities(s in -3.0f64..3.0, z in arb_complex(2.0)) {
        let lhs = Mobius::n(z) * Mobius::a(s);
        let rhs = Mobius::a(s) * Mobius::n(z * s.exp());
        prop_assert!(lhs.approx_eq(&rhs, 1e-10 * rhs.frobenius_sq()));
        let conj = Mobius::a(s) * Mobius::n(z) * Mobius::a(-s);
        prop_assert!(conj.approx_eq(&Mobius::n(z * (-s).exp()), 1e-9 * conj.frobenius_sq()));
    }

    #[test]
    fn busemann_cocycle(xi in arb_complex(2.0), x in arb_point(), y in arb_point(), w in arb_point()) {
        let xi = BoundaryPoint::Finite(xi);
        let b = busemann(xi, &x, &y).unwrap() + busemann(xi, &y, &w).unwrap();
        prop_assert!((b - busemann(xi, &x, &w).unwrap()).abs() < 1e-8);
        prop_assert!(busemann(xi, &x, &y).unwrap().abs() <= hyp_dist(&x, &y) + 1e-8);
    }

    #[test]
    fn busemann_equivariance(g in arb_mobius(), xi in arb_complex(2.0), x in arb_point(), y in arb_point()) {
        let xi = BoundaryPoint::Finite(xi);
        let lhs = busemann_closed(g.apply_boundary(xi), &g.apply_h3(&x), &g.apply_h3(&y));
        prop_assert!((lhs - busemann_closed(xi, &x, &y)).abs() < 1e-8);
    }

    #[test]
    fn busemann_probe_agrees_with_closed_form(xi in arb_complex(3.0), x in arb_point(), y in arb_point()) {
        let xi = BoundaryPoint::Finite(xi);
        prop_assert!((busemann(xi, &x, &y).unwrap() - busemann_closed(xi, &x, &y)).abs() < 1e-9);
    }

    #[test]
    fn iwasawa_round_trip(g in arb_mobius()) {
        let iw = iwasawa(&g).unwrap();
        let back = iw.k * Mobius::a(iw.s) * Mobius::n(iw.z);
        prop_assert!(back.approx_eq(&g, 1e-9 * g.frobenius_sq()));
        // k is unitary, so it fixes o
        let ko = iw.k.apply_origin();
        prop_assert!(hyp_dist(&ko, &H3Point::ORIGIN) < 1e-7);
    }

    #[test]
    fn box_round_trip(w in arb_complex(0.5), s in -0.5f64..0.5, z in arb_complex(0.5), theta in -1.5f64..1.5) {
        let bc = BoxCoords { w, s, z, theta };
        let back = decompose_box(&bc.compose()).unwrap();
        prop_assert!((back.w - w).norm() < 1e-12 && (back.s - s).abs() < 1e-12);
        prop_assert!((back.z - z).norm() < 1e-12 && (back.theta - theta).abs() < 1e-12);
    }

    #[test]
    fn a_flow_fixes_forward_endpoint(g in arb_mobius(), s in -3.0f64..3.0) {
        let (p0, m0) = frame_endpoints(&g);
        let (p1, m1) = frame_endpoints(&(g * Mobius::a(s)));
        prop_assert!(p0.chordal(p1) < 1e-9 && m0.chordal(m1) < 1e-9);
        let (p2, _) = frame_endpoints(&(g * Mobius::n(c(0.3, 0.1))));
        prop_assert!(p2.chordal(p0) > 0.0 || p0 == BoundaryPoint::Infinity);
        let (_, m2) = frame_endpoints(&(g * Mobius::n(c(0.3, 0.1))));
        prop_assert!(m2.chordal(m0) < 1e-9);
    }
}

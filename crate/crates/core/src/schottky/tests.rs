use super::table::{pairs_from_toml, pairs_to_toml, parse_complex};
use super::*;
use crate::hyperbolic::{hyp_dist, BoundaryPoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn four_disks() -> Vec<DiskPair> {
    vec![
        DiskPair { from: Disk::new(c(-2.0, 0.0), 0.5), to: Disk::new(c(2.0, 0.0), 0.5) },
        DiskPair { from: Disk::new(c(0.0, -2.0), 0.5), to: Disk::new(c(0.0, 2.0), 0.5) },
    ]
}

fn real_line() -> Vec<DiskPair> {
    vec![
        DiskPair { from: Disk::new(c(-4.5, 0.0), 1.0), to: Disk::new(c(4.5, 0.0), 1.0) },
        DiskPair { from: Disk::new(c(-1.5, 0.0), 1.0), to: Disk::new(c(1.5, 0.0), 1.0) },
    ]
}

#[test]
fn generator_maps_circle_onto_circle() {
    for pair in four_disks().iter().chain(real_line().iter()) {
        let g = pairing_generator(pair).unwrap();
        for s in 0..32 {
            let z = pair.from.center + Complex64::from_polar(pair.from.radius, s as f64 * 0.2);
            let w = g.apply(z);
            assert!(((w - pair.to.center).norm() - pair.to.radius).abs() < 1e-12);
        }
        // exterior goes inside
        assert!(pair.to.contains(g.apply(c(100.0, 37.0))));
        assert!(pair.to.contains(g.apply(c(0.1, -0.2))));
    }
}

#[test]
fn generator_has_no_twist() {
    // trace is real and > 2, so the generator is a pure translation along its axis
    for pair in four_disks() {
        let g = pairing_generator(&pair).unwrap();
        assert!(g.trace().im.abs() < 1e-12 && g.trace().re.abs() > 2.0);
    }
}

#[test]
fn fuchsian_detection() {
    assert!(SchottkyGroup::build(&real_line()).unwrap().is_fuchsian());
    assert!(!SchottkyGroup::build(&four_disks()).unwrap().is_fuchsian());
}

#[test]
fn invalid_configurations_are_rejected() {
    let mut bad = four_disks();
    bad[0].to = Disk::new(c(0.0, 1.8), 0.5);
    assert!(matches!(SchottkyGroup::build(&bad), Err(SchottkyError::OverlappingDisks(..))));
    assert!(matches!(SchottkyGroup::build(&four_disks()[..1]), Err(SchottkyError::RankTooSmall { .. })));
    let mut covering = four_disks();
    covering[0].from = Disk::new(c(0.0, 0.0), 1.5);
    assert!(SchottkyGroup::build(&covering).is_err());
}

#[test]
fn word_counts() {
    let g = SchottkyGroup::build(&four_disks()).unwrap();
    assert_eq!(enumerate_words(&g, 3).len(), 53);
    assert_eq!(count_reduced_words(4, 3), 53);
    let cyc = CyclicGroup::new(2.0);
    assert_eq!(enumerate_words(&cyc, 5).len(), 11);
}

#[test]
fn reduce_identity_is_identity() {
    let g = SchottkyGroup::build(&four_disks()).unwrap();
    let r = g.reduce(&Mobius::IDENTITY).unwrap();
    assert_eq!(r.rep, Mobius::IDENTITY);
    assert!(r.word.is_empty());
}

#[test]
fn reduce_strips_group_words() {
    let g = SchottkyGroup::build(&four_disks()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for len in 1..8 {
        let w = g.random_word(&mut rng, len);
        let el = g.element(&w);
        let r = g.reduce(&el).unwrap();
        assert_eq!(r.word, w);
        assert!(r.rep.approx_eq(&Mobius::IDENTITY, 1e-14 * el.frobenius_sq()));
    }
}

#[test]
fn nested_disks_are_nested() {
    let g = SchottkyGroup::build(&four_disks()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let w = g.random_word(&mut rng, 6);
        for n in 1..6 {
            let outer = g.nested_disk(&w[..n]);
            let inner = g.nested_disk(&w[..n + 1]);
            assert!((inner.center - outer.center).norm() + inner.radius <= outer.radius + 1e-12);
        }
    }
}

#[test]
fn limit_samples_lie_in_disks_and_refine() {
    let g = SchottkyGroup::build(&four_disks()).unwrap();
    let pts = g.sample_limit_set(8, 200, 1);
    for p in &pts {
        assert!(g.disks().iter().any(|d| d.contains(*p)));
    }
    // refining a word moves its point by less than the coarse nested diameter
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let mut w = g.random_word(&mut rng, 6);
        let coarse = g.nested_disk(&w);
        let ext = g.random_word(&mut rng, 3);
        if ext[0] as usize == (*w.last().unwrap() as usize ^ 1) {
            continue;
        }
        w.extend(ext);
        let fine = g.nested_disk(&w);
        assert!((fine.center - coarse.center).norm() < 2.0 * coarse.radius);
    }
    assert!(g.contraction() < 1.0);
    assert!(g.max_nested_diameter(6) <= g.resolution(6) + 1e-12);
}

#[test]
fn pair_table_round_trips_exactly() {
    let pairs = vec![DiskPair {
        from: Disk::new(c(0.1 + 0.2, -1.0 / 3.0), 0.7),
        to: Disk::new(c(1e-7, 2.0f64.sqrt()), 0.1),
    }];
    let text = pairs_to_toml(&pairs);
    assert_eq!(pairs_from_toml(&text).unwrap(), pairs);
}

#[test]
fn complex_parser_examples() {
    assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
    assert_eq!(parse_complex("-2i").unwrap(), c(0.0, -2.0));
    assert_eq!(parse_complex("1.5-2e-3i").unwrap(), c(1.5, -2e-3));
    assert_eq!(parse_complex("1e-3+i").unwrap(), c(1e-3, 1.0));
    assert!(parse_complex("abc").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_well_defined(seed in any::<u64>(), len in 0usize..6) {
        let g = SchottkyGroup::build(&four_disks()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let h = Mobius::new(
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
        ).unwrap();
        let w = g.random_word(&mut rng, len);
        let gamma = g.element(&w);
        let r1 = g.reduce(&h).unwrap();
        let r2 = g.reduce(&(gamma * h)).unwrap();
        // same coset; matrices agree up to rounding amplified by ‖γ‖²
        let mut expected: Vec<u8> = Vec::new();
        for &l in w.iter().chain(r1.word.iter()) {
            if expected.last().map(|&x| x ^ 1) == Some(l) { expected.pop(); } else { expected.push(l); }
        }
        prop_assert_eq!(&r2.word, &expected);
        prop_assert!(r1.rep.approx_eq(&r2.rep, 1e-13 * gamma.frobenius_sq() * h.frobenius_sq()));
        let again = g.reduce(&r1.rep).unwrap();
        prop_assert_eq!(again.rep, r1.rep);
        prop_assert!(again.word.is_empty());
        prop_assert!(g.in_fundamental_domain(&r1.rep.apply_origin()));
    }

    #[test]
    fn group_elements_respect_ping_pong(seed in any::<u64>(), len in 1usize..7) {
        let g = SchottkyGroup::build(&real_line()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = g.random_word(&mut rng, len);
        let el = g.element(&w);
        let img = el.apply_boundary(BoundaryPoint::Infinity).finite().unwrap();
        prop_assert!(g.nested_disk(&w).contains(img) || g.disk(w[0] as usize).contains(img));
        prop_assert!(hyp_dist(&el.apply_origin(), &crate::hyperbolic::H3Point::ORIGIN) > 0.1);
    }
}

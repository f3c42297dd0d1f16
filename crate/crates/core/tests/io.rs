use num_complex::Complex64;
use proptest::prelude::*;

use kleinlab::hyperbolic::{BoundaryPoint, Mobius};
use kleinlab::io::{fmt_f64, hash_measure, read_measure, read_samples, write_measure, write_samples, IoError};
use kleinlab::measures::{FramePoint, WeightedSample};
use kleinlab::patterson::{Atom, AtomicMeasure, Provenance};

fn measure(points: &[(f64, f64, f64)]) -> AtomicMeasure {
    let atoms = points.iter().map(|&(x, y, w)| Atom { xi: BoundaryPoint::Finite(Complex64::new(x, y)), weight: w }).collect();
    AtomicMeasure::new(
        atoms,
        Provenance { config_hash: "abc".into(), exponent: 0.53, max_len: 9, band: 2, base: None, seed: 4, sampled: true },
    )
}

#[test]
fn measure_file_round_trip_is_exact() {
    let mut mu = measure(&[(0.1, -0.2, 0.25), (1.0 / 3.0, 2.0f64.sqrt(), 0.75)]);
    mu.atoms.push(Atom { xi: BoundaryPoint::Infinity, weight: 1e-300 });
    let mut bytes = Vec::new();
    write_measure(&mut bytes, &mu).unwrap();
    let back = read_measure(bytes.as_slice()).unwrap();
    assert_eq!(hash_measure(&back), hash_measure(&mu));
    assert_eq!(back.provenance.exponent, 0.53);
    assert_eq!(back.provenance.seed, 4);
    assert!(back.provenance.sampled);
    assert!(String::from_utf8(bytes).unwrap().starts_with("# total_mass="));
}

#[test]
fn sample_file_round_trip_is_exact() {
    let rep = Mobius::n_minus(Complex64::new(0.3, 0.1)) * Mobius::a(0.7) * Mobius::m(1.1);
    let samples = vec![WeightedSample { frame: FramePoint { rep }, weight: 0.125 }];
    let mut bytes = Vec::new();
    write_samples(&mut bytes, &samples, "box", "nu", 1.27, 9).unwrap();
    assert_eq!(read_samples(bytes.as_slice()).unwrap(), samples);
}

#[test]
fn measure_hash_sees_every_bit() {
    let a = measure(&[(0.1, 0.2, 0.5)]);
    let b = measure(&[(0.1, 0.2, 0.5 + f64::EPSILON)]);
    assert_ne!(hash_measure(&a), hash_measure(&b));
}

#[test]
fn malformed_rows_report_their_line() {
    let text = "# total_mass=1\nre,im,weight\n0.1,0.2,0.5\n0.1,oops,0.5\n";
    match read_measure(text.as_bytes()) {
        Err(IoError::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

proptest! {
    #[test]
    fn floats_print_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

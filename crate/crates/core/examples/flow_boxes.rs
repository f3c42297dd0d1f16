//! A flow box around a frame on a geodesic between two limit points: its BR
//! and BMS masses and weighted BR samples.

use kleinlab::config::load_preset;
use kleinlab::hyperbolic::{BoundaryPoint, H3Point};
use kleinlab::measures::{bms_box_mass, br_box_mass, normalize_bms, sample_br_box, BoxSpec, FramePoint};
use kleinlab::patterson::{build_ps, estimate_delta_series, PsOptions};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let group = load_preset("symmetric")?.config.group()?;
    let delta = estimate_delta_series(&group, 10, 1e-9)?.delta;
    let mut nu = build_ps(&group, &H3Point::ORIGIN, delta + 0.02, 8, 0, PsOptions::default())?;
    let k = normalize_bms(&group, &mut nu, delta, 0.05)?;
    println!("BMS normalizer {k:.5}");

    let nearest = |z: Complex64| nu.finite_atoms().map(|a| a.0).min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm())).unwrap();
    let plus = BoundaryPoint::Finite(nearest(Complex64::new(2.0, 0.0)));
    let minus = BoundaryPoint::Finite(nearest(Complex64::new(-2.0, 0.0)));
    let x0 = FramePoint::from_hopf(&group, plus, minus, 0.0, 0.0)?;
    let spec = BoxSpec::new(&group, x0, 0.3)?;
    let br = br_box_mass(&spec, &nu, delta);
    println!("m^BR(E) = {br:.5e}, m^BMS(E) = {:.5e}", bms_box_mass(&spec, &nu.coarsen(0.02), delta));

    let samples = sample_br_box(&group, &spec, &nu, delta, 5000, 42)?;
    let total: f64 = samples.iter().map(|s| s.weight).sum();
    println!("{} samples, total weight {total:.5e}", samples.len());
    Ok(())
}

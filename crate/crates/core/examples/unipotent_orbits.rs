//! Unipotent orbits: escape from the invariant plane of a Fuchsian group and
//! visits to a flow box.

use kleinlab::config::load_preset;
use kleinlab::dynamics::{escape_slope, recurrence_times};
use kleinlab::experiments::Lab;
use kleinlab::hyperbolic::BoundaryPoint;
use kleinlab::measures::{hopf_frame, FramePoint};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lab = Lab::new(load_preset("fuchsian")?, Some(1))?;
    let group = lab.group()?;
    let atoms: Vec<Complex64> = lab.ps()?.finite_atoms().map(|a| a.0).collect();
    let (plus, minus) = (BoundaryPoint::Finite(atoms[0]), BoundaryPoint::Finite(atoms[atoms.len() / 2]));
    for theta in [0.0, 0.4, 0.8, 1.2] {
        let x = FramePoint::from_element(group, &hopf_frame(plus, minus, 0.0, theta)?)?;
        println!("θ = {theta}: escape slope {:.4}", escape_slope(group, &x, 200.0, 0.05)?);
    }

    let spec = lab.reference_box()?;
    let visits = recurrence_times(group, &spec.center, spec, 200.0, 0.025)?;
    println!("{} visits from the box centre; time inside up to 200: {:.3}", visits.count(), visits.total_until(200.0));
    Ok(())
}

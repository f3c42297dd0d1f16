//! Conditional measures on expanding horospherical leaves against the
//! leafwise Patterson–Sullivan measure.

use kleinlab::experiments::Lab;
use kleinlab::config::load_preset;
use kleinlab::measures::{br_box_mass, conditional_leaf, leaf_ps_measure, LeafBump};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lab = Lab::new(load_preset("octahedral")?, Some(1))?;
    let group = lab.group()?;
    let delta = lab.delta()?;
    let (nu, _) = lab.bms_ps()?;
    let spec = lab.reference_box()?;
    let m_br = br_box_mass(spec, nu, delta);
    let psi = LeafBump { center: Complex64::new(0.0, 0.0), radius: 0.8 };
    let x = spec.center;
    let target = leaf_ps_measure(nu, delta, &x, &psi);
    println!("μ^PS_x(ψ) = {target:.5e}");
    for &s in &lab.config.s_grid {
        let v = conditional_leaf(group, spec, m_br, delta, &x, s, &psi, lab.config.rings)?;
        println!("  s = {s}: λ = {:.5e} from {} lifts, ratio {:.4}", v.value, v.hits, v.value / target);
    }
    Ok(())
}

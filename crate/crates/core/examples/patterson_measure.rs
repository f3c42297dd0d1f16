//! Patterson–Sullivan measure of a bundled configuration: conformality
//! residuals, local mass scaling and a CSV dump of the atoms.

use kleinlab::config::load_preset;
use kleinlab::hyperbolic::H3Point;
use kleinlab::io::write_measure;
use kleinlab::patterson::{build_ps, conformal_residual, estimate_delta_series, log_radii, shadow_exponent, PsOptions};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let group = load_preset("symmetric")?.config.group()?;
    let delta = estimate_delta_series(&group, 10, 1e-9)?.delta;
    let s = delta + 0.02;
    let nu = build_ps(&group, &H3Point::ORIGIN, s, 9, 0, PsOptions::default())?;
    println!("δ̂ = {delta:.5}, {} atoms, mass {:.12}", nu.len(), nu.total_mass());

    let y = H3Point::new(Complex64::new(0.2, -0.1), 1.3)?;
    for len in [6, 8, 10] {
        let r = conformal_residual(&group, &H3Point::ORIGIN, &y, s, len)?;
        println!("  max_len {len:>2}: median residual {:.3e}, p90 {:.3e}", r.median, r.p90);
    }

    let centres: Vec<Complex64> = group.sample_limit_set(10, 20, 3);
    let fit = shadow_exponent(&nu, &centres, &log_radii(0.01, 0.1, 10))?;
    println!("mass scaling exponent {:.4} (spread {:.4})", fit.slope, fit.spread);

    let path = std::env::temp_dir().join("kleinlab_nu.csv");
    write_measure(std::fs::File::create(&path)?, &nu)?;
    println!("atoms written to {}", path.display());
    Ok(())
}

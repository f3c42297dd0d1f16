//! Riesz energies of truncated Patterson–Sullivan measures below and above
//! δ̂, and projections of the measure onto lines.

use kleinlab::analysis::{alpha_energy, box_dimension_1d, project, projected_density};
use kleinlab::config::load_preset;
use kleinlab::hyperbolic::H3Point;
use kleinlab::patterson::{build_ps, estimate_delta_series, log_radii, PsOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let group = load_preset("thin")?.config.group()?;
    let delta = estimate_delta_series(&group, 10, 1e-9)?.delta;
    let opts = PsOptions { band: 0, ..PsOptions::default() };
    for len in [5, 6, 7] {
        let nu = build_ps(&group, &H3Point::ORIGIN, delta + 0.02, len, 0, opts)?;
        println!(
            "len {len}: I(0.8δ̂) = {:.4}, I(1.2δ̂) = {:.4}",
            alpha_energy(&nu, 0.8 * delta),
            alpha_energy(&nu, 1.2 * delta)
        );
    }

    let nu = build_ps(&group, &H3Point::ORIGIN, delta + 0.02, 8, 0, opts)?;
    for k in 0..4 {
        let theta = k as f64 * std::f64::consts::FRAC_PI_4;
        let line = project(&nu, theta);
        let dim = box_dimension_1d(&line.positions(), &log_radii(1e-4, 0.05, 12))?;
        let hist = projected_density(&nu, theta, 64);
        println!("θ = {theta:.3}: dimension {:.4}, occupancy {:.3}", dim.slope, hist.occupancy());
    }
    Ok(())
}

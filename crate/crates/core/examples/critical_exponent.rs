//! Critical exponent of a bundled configuration by the level-ratio and the
//! orbit-counting estimators.

use kleinlab::config::load_preset;
use kleinlab::patterson::{estimate_delta_orbit_from, estimate_delta_series_from, poincare_partial, OrbitStats};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "thin".into());
    let group = load_preset(&name)?.config.group()?;
    let stats = OrbitStats::collect(&group, 9);
    let series = estimate_delta_series_from(&stats, 1e-9)?;
    let orbit = estimate_delta_orbit_from(&stats)?;
    println!("{name}: series {:.5} ± {:.1e}, orbit {:.5} ± {:.1e}", series.delta, series.uncertainty, orbit.delta, orbit.uncertainty);
    for s in [series.delta - 0.1, series.delta, series.delta + 0.1] {
        println!("  partial sum at s = {s:.3}: {:.4}", poincare_partial(&group, s, 9));
    }
    Ok(())
}

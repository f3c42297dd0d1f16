//! φ̃₀ as a superposition of Poisson kernels and the finite-difference check
//! of its Laplace eigenvalue δ(2 − δ).

use kleinlab::config::load_preset;
use kleinlab::hyperbolic::{BoundaryPoint, H3Point};
use kleinlab::measures::{laplacian_residual, phi0, richardson_ratio, Phi0Field};
use kleinlab::patterson::{build_ps, estimate_delta_series, AtomicMeasure, PsOptions};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let atom = AtomicMeasure::dirac(BoundaryPoint::Finite(Complex64::new(0.0, 0.0)), 1.0);
    let p = H3Point::new(Complex64::new(0.0, 0.0), 2.0)?;
    println!("single atom: φ̃₀(0, 2) = {:.6}", phi0(&atom, 1.5, &p));

    let group = load_preset("thin")?.config.group()?;
    let delta = estimate_delta_series(&group, 10, 1e-9)?.delta;
    let nu = build_ps(&group, &H3Point::ORIGIN, delta + 0.02, 7, 0, PsOptions::default())?;
    let field = Phi0Field::new(&nu, delta);
    for (x, y, t) in [(0.0, 0.0, 1.0), (0.3, -0.2, 0.7), (-0.5, 0.4, 1.6)] {
        let q = H3Point::new(Complex64::new(x, y), t)?;
        println!(
            "({x:+.1}, {y:+.1}, {t:.1}): φ̃₀ = {:.5}, residual {:.2e}, Richardson {:.3}",
            field.eval(&q),
            laplacian_residual(&nu, delta, &q, 1e-3),
            richardson_ratio(&nu, delta, &q, 2e-2)
        );
    }
    Ok(())
}

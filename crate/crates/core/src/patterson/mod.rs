//! Poincaré series, critical exponent and Patterson–Sullivan measures.

mod series;

pub use series::{
    estimate_delta_orbit, estimate_delta_orbit_from, estimate_delta_series, estimate_delta_series_from,
    least_squares_slope, poincare_partial, DeltaEstimate, LevelHistogram, OrbitStats, BIN_WIDTH,
};

mod measure;

pub use measure::{build_ps, Atom, AtomicMeasure, PsOptions, Provenance};

mod diagnostics;

pub use diagnostics::{
    atom_residual, ball_masses, conformal_residual, log_radii, nonfocusing_fraction, quantile, shadow_exponent, shadow_exponent_local,
    ResidualStats, ShadowFit,
};

#[cfg(test)]
mod tests;

//! Energies, projections, dimensions and ergodic-average diagnostics.

mod dimension;
mod energy;
mod ergodic;
mod projection;

pub use dimension::{box_dimension, box_dimension_1d, BoxDimension};
pub use energy::{alpha_energy, alpha_energy_exact, alpha_energy_tree, EXACT_LIMIT, TREE_THETA};
pub use ergodic::{contracting, hopf_ratio, window_from_series, window_statistic, WindowStat};
pub use projection::{histogram, project, projected_density, Histogram, ProjectedMeasure};

#[cfg(test)]
mod tests;

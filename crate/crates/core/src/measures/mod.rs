//! BMS and BR measures, leafwise measures, the base eigenfunction and
//! conditional measures on horospherical leaves.

mod boxes;
mod frame;
mod leaf;
mod mixing;
mod normalize;
mod phi0;
mod sampling;

pub use boxes::{atom_windows, box_reach, br_box_mass, AtomWindow, BoxSpec, INJECTIVITY_WORDS};
pub use frame::{hopf_frame, hopf_time, FramePoint, WeightedSample};
pub use leaf::{
    conditional_leaf, conditional_leaf_grid, leaf_leb_density, leaf_leb_weight, leaf_ps_measure, leaf_ps_weight,
    ConditionalValue, LeafBump,
};
pub use mixing::{mixing_correlation, reversed_correlation, Estimate};
pub use normalize::{
    bms_box_mass, bms_total_mass, geodesic_length_outside, gromov_kernel, normalize_bms, phi0_l2_norm, L2Grid,
};
pub use phi0::{hyperbolic_laplacian, laplacian_residual, phi0, richardson_ratio, Phi0Field};
pub use sampling::{br_density_kan, bms_density, sample_br_box, sample_bms};

#[cfg(test)]
mod tests;

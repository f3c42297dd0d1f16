//! Hyperbolic 3-space and its isometry group PSL₂(ℂ).
//!
//! Conventions: o = (0, 1); a_s moves o to (0, e^s); n_z = (1 0; z 1) fixes 0;
//! a frame g has endpoints g⁺ = g(∞), g⁻ = g(0).

mod decompose;
mod mobius;
mod space;

pub use decompose::{decompose_box, frame_endpoints, iwasawa, BoxCoords, Iwasawa, CHART_EPS};
pub use mobius::Mobius;
pub use space::{busemann, busemann_closed, cosh_dist, horo_height, hyp_dist, poisson_kernel, BoundaryPoint, H3Point};

#[cfg(test)]
mod tests;

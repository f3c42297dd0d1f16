//! Points of X = Γ\G and weighted samples of them.

use serde::{Deserialize, Serialize};

use crate::error::SchottkyError;
use crate::hyperbolic::{frame_endpoints, horo_height, BoundaryPoint, H3Point, Mobius};
use crate::schottky::SchottkyGroup;

/// A point of X stored through its canonical representative, whose image of
/// o lies outside every hemisphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePoint {
    pub rep: Mobius,
}

impl FramePoint {
    /// Canonical point of X for any lift g.
    pub fn from_element(group: &SchottkyGroup, g: &Mobius) -> Result<Self, SchottkyError> {
        Ok(FramePoint { rep: group.reduce_rep(g)? })
    }

    /// A frame with prescribed endpoints and Hopf time β_{x⁻}(o, π(x)) = t,
    /// rotated by m_θ.
    pub fn from_hopf(
        group: &SchottkyGroup,
        plus: BoundaryPoint,
        minus: BoundaryPoint,
        t: f64,
        theta: f64,
    ) -> Result<Self, SchottkyError> {
        Ok(FramePoint { rep: group.reduce_rep(&hopf_frame(plus, minus, t, theta)?)? })
    }

    /// π(x) = rep · o.
    pub fn point(&self) -> H3Point {
        self.rep.apply_origin()
    }

    /// (x⁺, x⁻) of the representative.
    pub fn endpoints(&self) -> (BoundaryPoint, BoundaryPoint) {
        frame_endpoints(&self.rep)
    }

    /// β_{x⁻}(o, π(x)) of the representative.
    pub fn hopf_time(&self) -> f64 {
        hopf_time(&self.rep)
    }
}

/// β_{g⁻}(o, g·o) in closed form.
pub fn hopf_time(g: &Mobius) -> f64 {
    let (_, minus) = frame_endpoints(g);
    (horo_height(minus, &g.apply_origin()) / horo_height(minus, &H3Point::ORIGIN)).ln()
}

/// Lift g with g(∞) = plus, g(0) = minus, β_{g⁻}(o, g·o) = t, times m_θ.
pub fn hopf_frame(plus: BoundaryPoint, minus: BoundaryPoint, t: f64, theta: f64) -> Result<Mobius, SchottkyError> {
    let g0 = Mobius::from_endpoints(plus, minus)?;
    // a_u moves forward, away from g⁻, lowering the Hopf time by u
    let u = hopf_time(&g0) - t;
    Ok(g0 * Mobius::a(u) * Mobius::m(theta))
}

/// A frame with an importance weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSample {
    pub frame: FramePoint,
    pub weight: f64,
}

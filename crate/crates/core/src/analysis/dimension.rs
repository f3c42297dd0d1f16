//! Box-counting dimension of point clouds on the line and in the plane.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::AnalysisError;
use crate::patterson::least_squares_slope;

/// Slope of log N(r) against log(1/r) and the scales it used.
#[derive(Debug, Clone, Serialize)]
pub struct BoxDimension {
    pub slope: f64,
    pub radii: Vec<f64>,
    pub counts: Vec<usize>,
}

fn fit(radii: &[f64], counts: Vec<usize>, n: usize, diameter: f64) -> Result<BoxDimension, AnalysisError> {
    // keep scales below diameter/10 whose counts are not saturated by the sample size
    let keep: Vec<usize> =
        (0..radii.len()).filter(|&i| radii[i] <= diameter / 10.0 && counts[i] * 10 <= n && counts[i] > 1).collect();
    if keep.len() < 3 {
        return Err(AnalysisError::DegenerateRange);
    }
    let xs: Vec<f64> = keep.iter().map(|&i| -radii[i].ln()).collect();
    let ys: Vec<f64> = keep.iter().map(|&i| (counts[i] as f64).ln()).collect();
    Ok(BoxDimension {
        slope: least_squares_slope(&xs, &ys),
        radii: keep.iter().map(|&i| radii[i]).collect(),
        counts: keep.iter().map(|&i| counts[i]).collect(),
    })
}

/// Box dimension of planar points over the usable part of `radii`.
pub fn box_dimension(points: &[Complex64], radii: &[f64]) -> Result<BoxDimension, AnalysisError> {
    if points.len() < 2 {
        return Err(AnalysisError::InsufficientData("need at least two points".into()));
    }
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for z in points {
        lo_x = lo_x.min(z.re);
        lo_y = lo_y.min(z.im);
        hi_x = hi_x.max(z.re);
        hi_y = hi_y.max(z.im);
    }
    let diameter = (hi_x - lo_x).hypot(hi_y - lo_y);
    let counts = radii
        .iter()
        .map(|&r| {
            let cells: HashSet<(i64, i64)> =
                points.iter().map(|z| (((z.re - lo_x) / r).floor() as i64, ((z.im - lo_y) / r).floor() as i64)).collect();
            cells.len()
        })
        .collect();
    fit(radii, counts, points.len(), diameter)
}

/// Box dimension of points on a line.
pub fn box_dimension_1d(points: &[f64], radii: &[f64]) -> Result<BoxDimension, AnalysisError> {
    if points.len() < 2 {
        return Err(AnalysisError::InsufficientData("need at least two points".into()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let lo = sorted[0];
    let hi = sorted[sorted.len() - 1];
    let counts = radii
        .iter()
        .map(|&r| {
            let mut count = 0;
            let mut last = i64::MIN;
            for x in &sorted {
                let cell = ((x - lo) / r).floor() as i64;
                if cell != last {
                    count += 1;
                    last = cell;
                }
            }
            count
        })
        .collect();
    fit(radii, counts, points.len(), hi - lo)
}

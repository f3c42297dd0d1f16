//! Builds a Schottky group from four disks, samples its limit set and
//! estimates the box-counting dimension.

use kleinlab::analysis::box_dimension;
use kleinlab::patterson::{estimate_delta_series, log_radii};
use kleinlab::schottky::{Disk, DiskPair, SchottkyGroup};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = |re, im| Complex64::new(re, im);
    let group = SchottkyGroup::build(&[
        DiskPair { from: Disk::new(c(-2.0, 0.0), 0.8), to: Disk::new(c(2.0, 0.0), 0.8) },
        DiskPair { from: Disk::new(c(0.0, -2.0), 0.8), to: Disk::new(c(0.0, 2.0), 0.8) },
    ])?;
    println!("rank {} fuchsian {}", group.rank(), group.is_fuchsian());

    let points = group.sample_limit_set(12, 50_000, 1);
    let radii = log_radii((20.0 * group.resolution(12)).max(1e-3), 0.1, 8);
    let dim = box_dimension(&points, &radii)?;
    let delta = estimate_delta_series(&group, 10, 1e-9)?.delta;
    println!("box dimension {:.4} over {} scales, critical exponent {delta:.4}", dim.slope, dim.radii.len());
    for (r, n) in dim.radii.iter().zip(&dim.counts) {
        println!("  r = {r:.5}  N(r) = {n}");
    }
    Ok(())
}

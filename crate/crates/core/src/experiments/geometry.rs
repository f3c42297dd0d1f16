//! Experiments on the group, its orbit and the Patterson–Sullivan measure.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{table, Lab, LabError, Report};
use crate::analysis::{alpha_energy, box_dimension, box_dimension_1d, histogram, project as project_measure};
use crate::hyperbolic::{busemann, busemann_closed, decompose_box, hyp_dist, iwasawa, BoundaryPoint, BoxCoords, H3Point, Mobius};
use crate::io::{fmt_f64, write_histogram, write_measure, write_regression, Regression};
use crate::patterson::{
    conformal_residual, estimate_delta_orbit_from, estimate_delta_series_from, log_radii, quantile, shadow_exponent_local,
    OrbitStats,
};
use crate::schottky::LetterSet;

/// Random cases per identity in the geometry suite.
pub const GEOMETRY_CASES: usize = 200;
/// Tolerance of every identity in the geometry suite.
pub const GEOMETRY_TOL: f64 = 1e-9;

fn random_complex<R: Rng>(rng: &mut R, r: f64) -> Complex64 {
    Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

fn random_mobius<R: Rng>(rng: &mut R) -> Mobius {
    loop {
        let (a, b, c, d) = (random_complex(rng, 2.0), random_complex(rng, 2.0), random_complex(rng, 2.0), random_complex(rng, 2.0));
        if (a * d - b * c).norm() > 0.2 {
            if let Ok(m) = Mobius::new(a, b, c, d) {
                return m;
            }
        }
    }
}

fn random_point<R: Rng>(rng: &mut R) -> H3Point {
    H3Point { z: random_complex(rng, 2.0), t: rng.random_range(-1.5f64..1.5).exp() }
}

/// Isometry invariance, Busemann cocycle and equivariance, and the Iwasawa
/// and box round trips on random cases; records the worst error of each.
pub fn geometry_suite(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let mut rng = ChaCha8Rng::seed_from_u64(lab.seed.unwrap_or(0));
    let mut worst = [0.0f64; 6];
    for _ in 0..GEOMETRY_CASES {
        let g = random_mobius(&mut rng);
        let (p, q, r) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
        let d = hyp_dist(&p, &q);
        worst[0] = worst[0].max((hyp_dist(&g.apply_h3(&p), &g.apply_h3(&q)) - d).abs() / d.max(1.0));

        let xi = BoundaryPoint::Finite(random_complex(&mut rng, 2.0));
        let cocycle = busemann_closed(xi, &p, &q) + busemann_closed(xi, &q, &r) - busemann_closed(xi, &p, &r);
        worst[1] = worst[1].max(cocycle.abs());

        let len = rng.random_range(1..=3);
        let gamma = group.element(&group.random_word(&mut rng, len));
        let moved = busemann_closed(gamma.apply_boundary(xi), &gamma.apply_h3(&p), &gamma.apply_h3(&q));
        worst[2] = worst[2].max((moved - busemann_closed(xi, &p, &q)).abs());

        let probe = busemann(xi, &p, &q)?;
        worst[3] = worst[3].max((probe - busemann_closed(xi, &p, &q)).abs());

        let kan = iwasawa(&g)?;
        let back = kan.k * Mobius::a(kan.s) * Mobius::n(kan.z);
        worst[4] = worst[4].max(back.distance_mod_sign(&g) / g.frobenius_sq().sqrt());

        let bc = BoxCoords {
            w: random_complex(&mut rng, 0.5),
            s: rng.random_range(-0.5..0.5),
            z: random_complex(&mut rng, 0.5),
            theta: rng.random_range(-1.5..1.5),
        };
        let again = decompose_box(&bc.compose())?;
        let err = (again.w - bc.w).norm().max((again.s - bc.s).abs()).max((again.z - bc.z).norm()).max((again.theta - bc.theta).abs());
        worst[5] = worst[5].max(err);
    }
    let names = ["isometry", "cocycle", "equivariance", "busemann_routes", "iwasawa", "box"];
    let mut rep = Report::new("geometry", lab);
    rep.set("cases", GEOMETRY_CASES);
    for (n, w) in names.iter().zip(worst) {
        rep.set(&format!("max_error_{n}"), w);
    }
    rep.pass = Some(worst.iter().all(|w| *w <= GEOMETRY_TOL));
    Ok(rep)
}

/// Pairs (γ, h) checked by the reduction suite.
pub const REDUCTION_CASES: usize = 500;

/// reduce(γh) against reduce(h) for random γ of length ≤ 5 and random h:
/// the word of γh must be the free reduction of γ followed by the word of h,
/// and reducing a representative again must return it unchanged.
pub fn reduction_suite(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let mut rng = ChaCha8Rng::seed_from_u64(lab.seed.unwrap_or(0));
    let (mut word_ok, mut idem_ok, mut rep_gap) = (0usize, 0usize, 0.0f64);
    for _ in 0..REDUCTION_CASES {
        let h = random_mobius(&mut rng);
        let len = rng.random_range(0..=5);
        let w = group.random_word(&mut rng, len);
        let gamma = group.element(&w);
        let r1 = group.reduce(&h)?;
        let r2 = group.reduce(&(gamma * h))?;
        let mut expected: Vec<u8> = Vec::new();
        for &l in w.iter().chain(&r1.word) {
            if expected.last().map(|&x| group.inverse_letter(x as usize) as u8) == Some(l) {
                expected.pop();
            } else {
                expected.push(l);
            }
        }
        if r2.word == expected {
            word_ok += 1;
        }
        rep_gap = rep_gap.max(r1.rep.distance_mod_sign(&r2.rep) / r1.rep.frobenius_sq().sqrt());
        let again = group.reduce(&r1.rep)?;
        if again.rep == r1.rep && again.word.is_empty() {
            idem_ok += 1;
        }
    }
    let mut rep = Report::new("reduction", lab);
    rep.set("cases", REDUCTION_CASES);
    rep.set("same_coset", word_ok);
    rep.set("idempotent", idem_ok);
    rep.set("max_rep_rounding", rep_gap);
    rep.pass = Some(word_ok == REDUCTION_CASES && idem_ok == REDUCTION_CASES);
    Ok(rep)
}

/// Largest gap allowed between the two critical-exponent estimators.
pub const ESTIMATOR_GAP: f64 = 0.05;

/// Ratio-test and orbit-growth estimates of δ at `delta_len` and two
/// levels deeper, from one enumeration.
pub fn estimate_delta(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let short = lab.config.delta_len;
    let long = short + 2;
    let stats = OrbitStats::collect(group, long);
    let truncated = OrbitStats { levels: stats.levels[..=short].to_vec() };
    let series = [estimate_delta_series_from(&truncated, 1e-9)?, estimate_delta_series_from(&stats, 1e-9)?];
    let orbit = [estimate_delta_orbit_from(&truncated)?, estimate_delta_orbit_from(&stats)?];
    let gap = (series[1].delta - orbit[1].delta).abs();
    let stable = |e: &[crate::patterson::DeltaEstimate; 2]| (e[1].delta - e[0].delta).abs() <= e[0].uncertainty + e[1].uncertainty;
    let mut rep = Report::new("estimate-delta", lab);
    rep.set("len_short", short);
    rep.set("len_long", long);
    rep.set("series_short", series[0]);
    rep.set("series_long", series[1]);
    rep.set("orbit_short", orbit[0]);
    rep.set("orbit_long", orbit[1]);
    rep.set("gap", gap);
    rep.set("series_stable", stable(&series));
    rep.set("orbit_stable", stable(&orbit));
    rep.pass = Some(gap <= ESTIMATOR_GAP && stable(&series) && stable(&orbit));
    let rows: Vec<Vec<String>> = (1..=long)
        .map(|k| {
            let h = &stats.levels[k];
            vec![k.to_string(), h.total.to_string(), fmt_f64(h.min), fmt_f64(h.max), fmt_f64(h.exp_sum(series[1].delta))]
        })
        .collect();
    rep.attach(
        "levels.csv",
        table(&[("config", lab.hash.clone())], &["len", "words", "min_disp", "max_disp", "sum_at_delta"], &rows),
    );
    Ok(rep)
}

/// Truncations of the conformality check.
pub const CONFORMAL_LENS: [usize; 3] = [8, 10, 12];
/// Bound on the median residual at the deepest truncation.
pub const CONFORMAL_BOUND: f64 = 0.05;

/// Builds ν_o and checks the conformal cocycle of the atom weights.
pub fn ps_build(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let nu = lab.ps()?;
    let s = nu.provenance.exponent;
    let y = H3Point { z: Complex64::new(0.2, -0.1), t: 1.3 };
    let mut medians = Vec::new();
    let mut rows = Vec::new();
    for l in CONFORMAL_LENS {
        let r = conformal_residual(group, &H3Point::ORIGIN, &y, s, l)?;
        medians.push(r.median);
        rows.push(vec![l.to_string(), r.count.to_string(), fmt_f64(r.median), fmt_f64(r.p90)]);
    }
    let monotone = medians.windows(2).all(|w| w[1] < w[0]);
    let mut rep = Report::new("ps-build", lab);
    rep.set("delta", lab.delta()?);
    rep.set("exponent", s);
    rep.set("atoms", nu.len());
    rep.set("sampled", nu.provenance.sampled);
    rep.set("total_mass", nu.total_mass());
    rep.set("residual_medians", &medians);
    rep.set("residual_monotone", monotone);
    rep.pass = Some(monotone && medians[2] < CONFORMAL_BOUND);
    let mut bytes = Vec::new();
    write_measure(&mut bytes, nu)?;
    rep.attach("measure.csv", bytes);
    rep.attach("conformal.csv", table(&[("config", lab.hash.clone())], &["max_len", "words", "median", "p90"], &rows));
    Ok(rep)
}

/// Points per seed in the shadow regression.
pub const SHADOW_POINTS: usize = 40;
/// Radii per point in the shadow regression.
pub const SHADOW_RADII: usize = 16;

fn limit_diameter(lab: &Lab, seed: u64) -> Result<f64, LabError> {
    let pts = lab.group()?.sample_limit_set(12, 4000, seed);
    let mut diam: f64 = 0.0;
    for p in &pts {
        for q in pts.iter().step_by(40) {
            diam = diam.max((p - q).norm());
        }
    }
    Ok(diam)
}

/// Slope of log ν(B(ξ, r)) against log r at limit points ξ, one fit per seed;
/// radii run from ten nested-disk diameters at the truncation depth up to a
/// tenth of the limit-set diameter.
pub fn shadow(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let nu = lab.ps()?;
    let delta = lab.delta()?;
    let depth = lab.config.max_len;
    let diam = limit_diameter(lab, 1)?;
    let mut slopes = Vec::new();
    let mut rows = Vec::new();
    for &seed in &lab.config.seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<(Complex64, Vec<f64>)> = (0..SHADOW_POINTS)
            .map(|_| {
                let w = group.random_word(&mut rng, depth + 2);
                let local = 2.0 * group.nested_disk(&w[..depth]).radius;
                (group.nested_disk(&w).center, log_radii(10.0 * local, diam / 10.0, SHADOW_RADII))
            })
            .collect();
        let fit = shadow_exponent_local(nu, &samples)?;
        for (i, (xi, _)) in samples.iter().enumerate() {
            rows.push(vec![seed.to_string(), fmt_f64(xi.re), fmt_f64(xi.im), fmt_f64(fit.per_point[i])]);
        }
        slopes.push(fit.slope);
    }
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    let (lo, hi) = slopes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    let spread = (hi - lo) / mean;
    let within = slopes.iter().all(|s| (s / delta - 1.0).abs() <= 0.1);
    let mut rep = Report::new("shadow", lab);
    rep.set("delta", delta);
    rep.set("slopes", &slopes);
    rep.set("seed_spread", spread);
    rep.pass = Some(within && spread < 0.05);
    rep.attach("shadow.csv", table(&[("config", lab.hash.clone())], &["seed", "re", "im", "slope"], &rows));
    Ok(rep)
}

/// Radius range of box counting on atoms at truncation depth `depth`.
fn dimension_radii(lab: &Lab, extent: f64) -> Result<Vec<f64>, LabError> {
    let res = lab.group()?.max_nested_diameter(lab.config.max_len.min(MAX_RESOLUTION_DEPTH));
    Ok(log_radii(10.0 * res, extent / 10.0, SHADOW_RADII))
}

/// Deepest level at which nested-disk diameters are enumerated.
const MAX_RESOLUTION_DEPTH: usize = 9;
/// Word depth of random limit-set samples.
const SAMPLE_DEPTH: usize = 14;
/// Number of random limit-set samples.
const SAMPLE_COUNT: usize = 100_000;

/// Box-counting dimension of Λ from the atoms of ν and from random deep
/// nested-disk centres.
pub fn boxdim(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let delta = lab.delta()?;
    let nu = lab.ps()?;
    let pts: Vec<Complex64> = nu.finite_atoms().map(|p| p.0).collect();
    let diam = 2.0 * pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radii = dimension_radii(lab, diam)?;
    let from_atoms = box_dimension(&pts, &radii)?;
    let samples = group.sample_limit_set(SAMPLE_DEPTH, SAMPLE_COUNT, lab.seed()?);
    let from_samples = box_dimension(&samples, &radii)?;
    let ok = |d: f64| (d / delta - 1.0).abs() <= 0.1;
    let mut rep = Report::new("boxdim", lab);
    rep.set("delta", delta);
    rep.set("atoms_dimension", from_atoms.slope);
    rep.set("samples_dimension", from_samples.slope);
    rep.pass = Some(ok(from_atoms.slope) && ok(from_samples.slope));
    for (file, bd) in [("boxdim_atoms.csv", &from_atoms), ("boxdim_samples.csv", &from_samples)] {
        let mut bytes = Vec::new();
        write_regression(&mut bytes, &Regression::from(bd), &[("config", lab.hash.clone())])?;
        rep.attach(file, bytes);
    }
    Ok(rep)
}

/// Occupancy above which a projection counts as spread out.
pub const OCCUPANCY_LEVEL: f64 = 0.3;

/// Projections p_θ(ξ) = Im(e^{−iθ}ξ) of ν over a uniform direction grid:
/// box dimension of each projection and its bin occupancy at two bin counts.
pub fn project(lab: &Lab) -> Result<Report, LabError> {
    let delta = lab.delta()?;
    let nu = lab.ps()?;
    let n = lab.config.directions;
    let bins = lab.config.bins;
    let mut dims = Vec::with_capacity(n);
    let mut occ = [Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let theta = std::f64::consts::PI * k as f64 / n as f64;
        let p = project_measure(nu, theta);
        let pos = p.positions();
        let lo = pos.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = pos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let dim = box_dimension_1d(&pos, &dimension_radii(lab, hi - lo)?).map(|b| b.slope).unwrap_or(f64::NAN);
        let (o1, o2) = (histogram(&p, bins).occupancy(), histogram(&p, 2 * bins).occupancy());
        dims.push(dim);
        occ[0].push(o1);
        occ[1].push(o2);
        rows.push(vec![fmt_f64(theta), fmt_f64(dim), fmt_f64(o1), fmt_f64(o2)]);
    }
    let median = quantile(&dims, 0.5);
    let frac = |o: &Vec<f64>| o.iter().filter(|&&x| x >= OCCUPANCY_LEVEL).count() as f64 / n as f64;
    let (f1, f2) = (frac(&occ[0]), frac(&occ[1]));
    let mut rep = Report::new("project", lab);
    rep.set("delta", delta);
    rep.set("median_dimension", median);
    rep.set("spread_fraction", f1);
    rep.set("spread_fraction_refined", f2);
    rep.pass = Some(if delta < 1.0 { (median / delta - 1.0).abs() <= 0.15 } else { f1 >= 0.8 && (f2 - f1).abs() <= 0.1 });
    rep.attach(
        "directions.csv",
        table(&[("config", lab.hash.clone()), ("bins", bins.to_string())], &["theta", "dimension", "occupancy", "occupancy_refined"], &rows),
    );
    let mut bytes = Vec::new();
    write_histogram(&mut bytes, &histogram(&project_measure(nu, 0.0), bins), &[("config", lab.hash.clone()), ("theta", fmt_f64(0.0))])?;
    rep.attach("histogram.csv", bytes);
    Ok(rep)
}

/// Largest relative change allowed for a finite energy.
pub const ENERGY_STABLE: f64 = 0.05;
/// Smallest growth factor of a divergent energy.
pub const ENERGY_GROWTH: f64 = 2.0;

/// I_α(ν) at α = 0.8δ̂ and 1.2δ̂ along increasing truncations, with atoms
/// on single-length words so that no two atoms coincide.
pub fn energy(lab: &Lab) -> Result<Report, LabError> {
    let delta = lab.delta()?;
    let lens = &lab.config.energy_lens;
    let (lo_a, hi_a) = (0.8 * delta, 1.2 * delta);
    let mut below = Vec::new();
    let mut above = Vec::new();
    let mut rows = Vec::new();
    for &l in lens {
        let nu = lab.build_ps(l, 0)?;
        let (a, b) = (alpha_energy(&nu, lo_a), alpha_energy(&nu, hi_a));
        rows.push(vec![l.to_string(), nu.len().to_string(), fmt_f64(a), fmt_f64(b)]);
        below.push(a);
        above.push(b);
    }
    let k = below.len();
    let change = (below[k - 1] / below[k - 2] - 1.0).abs();
    let growth = above[k - 1] / above[0];
    let mut rep = Report::new("energy", lab);
    rep.set("delta", delta);
    rep.set("alpha_below", lo_a);
    rep.set("alpha_above", hi_a);
    rep.set("energy_below", &below);
    rep.set("energy_above", &above);
    rep.set("last_change_below", change);
    rep.set("growth_above", growth);
    rep.pass = Some(change < ENERGY_STABLE && growth >= ENERGY_GROWTH);
    rep.attach(
        "energy.csv",
        table(&[("config", lab.hash.clone()), ("alpha_below", fmt_f64(lo_a)), ("alpha_above", fmt_f64(hi_a))], &["max_len", "atoms", "energy_below", "energy_above"], &rows),
    );
    Ok(rep)
}

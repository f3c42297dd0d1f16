//! Experiments on unipotent orbits: recurrence, windows, Hopf ratios and escape.

use super::{table, Lab, LabError, Report};
use crate::analysis::{contracting, hopf_ratio, window_from_series};
use crate::config::ConfigError;
use crate::dynamics::{escape_slope, orbit_series, orbit_series_on, recurrence_times};
use crate::hyperbolic::Mobius;
use crate::io::{fmt_f64, write_series, write_visits};
use crate::measures::{br_box_mass, hopf_frame, phi0_l2_norm, sample_br_box, FramePoint, L2Grid, Phi0Field, WeightedSample};
use crate::parallel::ordered_map;

/// Seed offset separating start samples from other draws.
const START_STREAM: u64 = 0x5354_4152_5453;

fn starts(lab: &Lab) -> Result<Vec<WeightedSample>, LabError> {
    let (nu, _) = lab.bms_ps()?;
    let spec = lab.reference_box()?;
    Ok(sample_br_box(lab.group()?, spec, nu, lab.delta()?, lab.config.starts, lab.seed()? ^ START_STREAM)?)
}

/// Visit lengths of BR-sampled starts over the horizons; an orbit counts as
/// recurrent when its total visit length grows strictly with the horizon.
pub fn flow(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let spec = lab.reference_box()?;
    let horizons = &lab.config.horizons;
    let t_max = horizons.iter().copied().fold(0.0, f64::max);
    let dt = lab.config.dt;
    let xs = starts(lab)?;
    let visits = ordered_map(xs.len(), |i| recurrence_times(group, &xs[i].frame, spec, t_max, dt));
    let visits = visits.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::with_capacity(xs.len());
    let mut growing = 0usize;
    for (i, v) in visits.iter().enumerate() {
        let totals: Vec<f64> = horizons.iter().map(|&t| v.total_until(t)).collect();
        if totals.windows(2).all(|w| w[1] > w[0]) {
            growing += 1;
        }
        let mut row = vec![i.to_string(), v.count().to_string()];
        row.extend(totals.iter().map(|t| fmt_f64(*t)));
        rows.push(row);
    }
    let fraction = growing as f64 / xs.len() as f64;
    let mut rep = Report::new("flow", lab);
    rep.set("delta", lab.delta()?);
    rep.set("starts", xs.len());
    rep.set("growing", growing);
    rep.set("growing_fraction", fraction);
    rep.pass = Some(fraction >= 0.7);
    let mut header = vec!["start".to_string(), "visits".to_string()];
    header.extend(horizons.iter().map(|t| format!("total_{t}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    rep.attach("recurrence.csv", table(&[("config", lab.hash.clone()), ("dt", fmt_f64(dt))], &header, &rows));
    let x = &xs[0].frame;
    let series = orbit_series_on(group, x, |y| if spec.contains(&y.rep) { 1.0 } else { 0.0 }, 0.0, t_max, dt)?;
    let mut bytes = Vec::new();
    write_series(&mut bytes, &series, &[("config", lab.hash.clone()), ("start", "0".into())])?;
    rep.attach("series.csv", bytes);
    let mut bytes = Vec::new();
    write_visits(&mut bytes, &visits[0], &[("config", lab.hash.clone()), ("start", "0".into())])?;
    rep.attach("visits.csv", bytes);
    Ok(rep)
}

/// BR-weighted fraction of starts x ∈ E with ∫_{−rT}^{rT} χ_E(xu_t) ≤ (1−r)∫_{−T}^{T} χ_E(xu_t),
/// for each r of `window_r` and T of `window_horizons`; plus the ψ ≡ 1 closed form.
pub fn window(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let spec = lab.reference_box()?;
    let dt = lab.config.dt;
    let rs = &lab.config.window_r;
    let ts = &lab.config.window_horizons;
    let t_max = ts.iter().copied().fold(0.0, f64::max);
    let xs = starts(lab)?;
    let series = ordered_map(xs.len(), |i| orbit_series(group, &xs[i].frame, |y| if spec.contains(&y.rep) { 1.0 } else { 0.0 }, t_max, dt));
    let series = series.into_iter().collect::<Result<Vec<_>, _>>()?;
    let total: f64 = xs.iter().map(|s| s.weight).sum();
    let mut fractions = vec![vec![0.0; rs.len()]; ts.len()];
    for (x, ser) in xs.iter().zip(&series) {
        for (ti, &t) in ts.iter().enumerate() {
            for (ri, &r) in rs.iter().enumerate() {
                if window_from_series(ser, t, r)?.good {
                    fractions[ti][ri] += x.weight / total;
                }
            }
        }
    }
    let good_r: Vec<f64> = rs.iter().enumerate().filter(|(ri, r)| fractions.iter().all(|f| f[*ri] > 0.5 * *r)).map(|(_, r)| *r).collect();

    // ψ ≡ 1 along the first orbit: inner = 2rT, outer = 2T
    let ones = orbit_series(group, &xs[0].frame, |_| 1.0, t_max, dt)?;
    let mut closed_form_error: f64 = 0.0;
    let mut closed_form_good = true;
    for &t in ts {
        for &r in rs {
            let w = window_from_series(&ones, t, r)?;
            closed_form_error = closed_form_error.max((w.inner - 2.0 * r * t).abs()).max((w.outer - 2.0 * t).abs());
            closed_form_good &= w.good == (r <= 0.5);
        }
    }
    let mut rows = Vec::new();
    for (ti, t) in ts.iter().enumerate() {
        for (ri, r) in rs.iter().enumerate() {
            rows.push(vec![fmt_f64(*t), fmt_f64(*r), fmt_f64(fractions[ti][ri]), fmt_f64(0.5 * r)]);
        }
    }
    let mut rep = Report::new("window", lab);
    rep.set("starts", xs.len());
    rep.set("good_fractions", &fractions);
    rep.set("good_r", &good_r);
    rep.set("closed_form_error", closed_form_error);
    rep.set("closed_form_good", closed_form_good);
    rep.pass = Some(!good_r.is_empty() && closed_form_good && closed_form_error <= 1e-9 * t_max);
    rep.attach("window.csv", table(&[("config", lab.hash.clone()), ("dt", fmt_f64(dt))], &["T", "r", "good_fraction", "threshold"], &rows));
    Ok(rep)
}

/// Relative distance from the target allowed for the final Hopf ratio.
pub const HOPF_BAND: f64 = 0.5;

/// Ratios ∫₀^T χ_E(xu_t) / ∫₀^T φ̃₀(π(xu_t)) over `hopf_times` for BR-sampled
/// starts, against m^BR(E)/∫_{F₀} φ̃₀² with ν normalized for |m^BMS| = 1.
pub fn hopf(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    let spec = lab.reference_box()?;
    let delta = lab.delta()?;
    let (nu, _) = lab.bms_ps()?;
    let dt = lab.config.dt;
    let times = &lab.config.hopf_times;
    let m_br = br_box_mass(spec, nu, delta);
    let l2 = phi0_l2_norm(group, &Phi0Field::coarse(nu, delta, L2_CELL), L2Grid { radial_per_unit: 6, angular: 48, panels_per_unit: 0.5 })?;
    let target = m_br / l2;
    let field = Phi0Field::coarse(nu, delta, FIELD_CELL);
    let xs = starts(lab)?;
    let mut rows = Vec::with_capacity(xs.len());
    let (mut contract, mut near, mut both) = (0usize, 0usize, 0usize);
    for (i, x) in xs.iter().enumerate() {
        let ratios = hopf_ratio(group, &x.frame, |y| if spec.contains(&y.rep) { 1.0 } else { 0.0 }, |y| field.eval(&y.point()), times, dt)?;
        let vals: Vec<f64> = ratios.iter().map(|r| r.unwrap_or(f64::NAN)).collect();
        let c = vals.iter().all(|v| v.is_finite()) && contracting(&vals);
        let last = *vals.last().unwrap_or(&f64::NAN);
        let n = (last / target - 1.0).abs() <= HOPF_BAND;
        contract += c as usize;
        near += n as usize;
        both += (c && n) as usize;
        let mut row = vec![i.to_string()];
        row.extend(vals.iter().map(|v| fmt_f64(*v)));
        rows.push(row);
    }
    let fraction = both as f64 / xs.len() as f64;
    let mut rep = Report::new("hopf", lab);
    rep.set("delta", delta);
    rep.set("br_mass", m_br);
    rep.set("phi0_l2", l2);
    rep.set("target", target);
    rep.set("starts", xs.len());
    rep.set("contracting", contract);
    rep.set("near_target", near);
    rep.set("both_fraction", fraction);
    rep.pass = Some(fraction >= 0.6);
    let mut header = vec!["start".to_string()];
    header.extend(times.iter().map(|t| format!("ratio_{t}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    rep.attach("hopf.csv", table(&[("config", lab.hash.clone()), ("target", fmt_f64(target))], &header, &rows));
    Ok(rep)
}

/// Coarsening cell of the φ̃₀ field evaluated along orbits.
const FIELD_CELL: f64 = 0.2;
/// Coarsening cell of the φ̃₀ field in the L² quadrature.
const L2_CELL: f64 = 0.1;

/// Orbit directions whose escape slope is checked.
pub const ESCAPE_THETAS: [f64; 3] = [0.4, 0.8, 1.2];

/// For a Fuchsian group: slope of d(xu_t, plane) against log t for rotated
/// starts, and the fraction of BR-sampled orbits with no box visit in (T/2, T].
pub fn escape(lab: &Lab) -> Result<Report, LabError> {
    let group = lab.group()?;
    if !group.is_fuchsian() {
        return Err(ConfigError::Field { field: "pairs", msg: "escape needs all disks centred on the real axis".into() }.into());
    }
    let spec = lab.reference_box()?;
    let dt = lab.config.dt;
    let t_max = lab.config.horizons.iter().copied().fold(0.0, f64::max);
    let xs = starts(lab)?;
    let visits = ordered_map(xs.len(), |i| recurrence_times(group, &xs[i].frame, spec, t_max, dt));
    let visits = visits.into_iter().collect::<Result<Vec<_>, _>>()?;
    let quiet = visits.iter().filter(|v| v.intervals.iter().all(|iv| iv.1 <= 0.5 * t_max)).count();
    let quiet_fraction = quiet as f64 / xs.len() as f64;

    let bases: Vec<Mobius> = xs
        .iter()
        .take(ESCAPE_STARTS)
        .map(|x| {
            let (p, m) = x.frame.endpoints();
            hopf_frame(p, m, x.frame.hopf_time(), 0.0)
        })
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut medians = Vec::new();
    for theta in std::iter::once(0.0).chain(ESCAPE_THETAS) {
        let mut slopes = Vec::with_capacity(bases.len());
        for b in &bases {
            let x = FramePoint::from_element(group, &(*b * Mobius::m(theta)))?;
            slopes.push(escape_slope(group, &x, t_max, dt)?);
        }
        let med = crate::patterson::quantile(&slopes, 0.5);
        rows.push(vec![fmt_f64(theta), fmt_f64(med), fmt_f64(slopes.iter().copied().fold(f64::INFINITY, f64::min)), fmt_f64(slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max))]);
        medians.push(med);
    }
    let generic_ok = medians[1..].iter().all(|m| (m - 1.0).abs() <= 0.1);
    let mut rep = Report::new("escape", lab);
    rep.set("thetas", ESCAPE_THETAS);
    rep.set("control_slope", medians[0]);
    rep.set("generic_slopes", &medians[1..]);
    rep.set("quiet_fraction", quiet_fraction);
    rep.set("starts", xs.len());
    rep.pass = Some(generic_ok && quiet_fraction >= 0.9);
    rep.attach("escape.csv", table(&[("config", lab.hash.clone()), ("T", fmt_f64(t_max))], &["theta", "median_slope", "min_slope", "max_slope"], &rows));
    Ok(rep)
}

/// Starts used for each escape direction.
const ESCAPE_STARTS: usize = 20;

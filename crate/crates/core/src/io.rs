//! CSV serialization of measures, samples, time series and fit tables.
//!
//! Every file starts with one `#` line of `key=value` provenance fields,
//! followed by a header row and data rows. Floats use 17 significant digits
//! so they round-trip exactly.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::analysis::{BoxDimension, Histogram};
use crate::dynamics::{TimeSeries, Visits};
use crate::hyperbolic::{BoundaryPoint, Mobius};
use crate::measures::{FramePoint, WeightedSample};
use crate::patterson::{Atom, AtomicMeasure, Provenance};

/// Failures while reading or writing data files.
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Hex SHA-256 of a byte string.
pub fn hash_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the exact bit patterns of an atomic measure.
pub fn hash_measure(mu: &AtomicMeasure) -> String {
    let mut h = Sha256::new();
    for a in &mu.atoms {
        let (re, im) = match a.xi {
            BoundaryPoint::Finite(z) => (z.re, z.im),
            BoundaryPoint::Infinity => (f64::INFINITY, f64::INFINITY),
        };
        h.update(re.to_le_bytes());
        h.update(im.to_le_bytes());
        h.update(a.weight.to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn provenance_line<W: Write>(out: &mut W, fields: &[(&str, String)]) -> std::io::Result<()> {
    let body: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(out, "# {}", body.join(" "))
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<(), IoError> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(header)?;
    for r in rows {
        wr.write_record(&r)?;
    }
    wr.flush()?;
    Ok(())
}

/// Writes `re,im,weight` rows; atoms at ∞ are written as `inf,inf`.
pub fn write_measure<W: Write>(mut out: W, mu: &AtomicMeasure) -> Result<(), IoError> {
    let p = &mu.provenance;
    provenance_line(
        &mut out,
        &[
            ("total_mass", fmt_f64(mu.total_mass())),
            ("group", p.config_hash.clone()),
            ("s", fmt_f64(p.exponent)),
            ("max_len", p.max_len.to_string()),
            ("band", p.band.to_string()),
            ("seed", p.seed.to_string()),
            ("sampled", p.sampled.to_string()),
        ],
    )?;
    let rows = mu.atoms.iter().map(|a| match a.xi {
        BoundaryPoint::Finite(z) => vec![fmt_f64(z.re), fmt_f64(z.im), fmt_f64(a.weight)],
        BoundaryPoint::Infinity => vec!["inf".into(), "inf".into(), fmt_f64(a.weight)],
    });
    write_rows(out, &["re", "im", "weight"], rows)
}

fn parse_f64(s: &str, line: usize) -> Result<f64, IoError> {
    s.trim().parse::<f64>().map_err(|_| IoError::Parse { line, msg: format!("not a number: {s:?}") })
}

/// Reads a file written by [`write_measure`].
pub fn read_measure<R: BufRead>(mut input: R) -> Result<AtomicMeasure, IoError> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    let mut provenance = Provenance::default();
    for kv in first.trim_start_matches('#').split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or(IoError::Parse { line: 1, msg: format!("bad field {kv:?}") })?;
        match k {
            "group" => provenance.config_hash = v.to_string(),
            "s" => provenance.exponent = parse_f64(v, 1)?,
            "max_len" => provenance.max_len = v.parse().map_err(|_| IoError::Parse { line: 1, msg: "max_len".into() })?,
            "band" => provenance.band = v.parse().map_err(|_| IoError::Parse { line: 1, msg: "band".into() })?,
            "seed" => provenance.seed = v.parse().map_err(|_| IoError::Parse { line: 1, msg: "seed".into() })?,
            "sampled" => provenance.sampled = v == "true",
            _ => {}
        }
    }
    let mut rd = csv::Reader::from_reader(input);
    let mut atoms = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 3;
        let (re, im, w) = (parse_f64(&rec[0], line)?, parse_f64(&rec[1], line)?, parse_f64(&rec[2], line)?);
        let xi = if re.is_infinite() { BoundaryPoint::Infinity } else { BoundaryPoint::Finite(Complex64::new(re, im)) };
        atoms.push(Atom { xi, weight: w });
    }
    Ok(AtomicMeasure::new(atoms, provenance))
}

fn matrix_cells(m: &Mobius) -> Vec<String> {
    [m.a, m.b, m.c, m.d].iter().flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)]).collect()
}

/// Writes frame matrices and weights of a sample list.
pub fn write_samples<W: Write>(
    mut out: W,
    samples: &[WeightedSample],
    box_hash: &str,
    nu_hash: &str,
    delta: f64,
    seed: u64,
) -> Result<(), IoError> {
    provenance_line(
        &mut out,
        &[("box", box_hash.to_string()), ("nu", nu_hash.to_string()), ("delta", fmt_f64(delta)), ("seed", seed.to_string())],
    )?;
    let rows = samples.iter().map(|s| {
        let mut r = matrix_cells(&s.frame.rep);
        r.push(fmt_f64(s.weight));
        r
    });
    write_rows(out, &["a_re", "a_im", "b_re", "b_im", "c_re", "c_im", "d_re", "d_im", "weight"], rows)
}

/// Reads a file written by [`write_samples`].
pub fn read_samples<R: BufRead>(mut input: R) -> Result<Vec<WeightedSample>, IoError> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 3;
        let v: Vec<f64> = (0..9).map(|k| parse_f64(&rec[k], line)).collect::<Result<_, _>>()?;
        let rep = Mobius {
            a: Complex64::new(v[0], v[1]),
            b: Complex64::new(v[2], v[3]),
            c: Complex64::new(v[4], v[5]),
            d: Complex64::new(v[6], v[7]),
        };
        out.push(WeightedSample { frame: FramePoint { rep }, weight: v[8] });
    }
    Ok(out)
}

/// Writes `t,value` rows of a time series.
pub fn write_series<W: Write>(mut out: W, series: &TimeSeries, provenance: &[(&str, String)]) -> Result<(), IoError> {
    let mut fields = provenance.to_vec();
    fields.push(("dt", fmt_f64(series.dt)));
    provenance_line(&mut out, &fields)?;
    let rows = series.times.iter().zip(&series.values).map(|(t, v)| vec![fmt_f64(*t), fmt_f64(*v)]);
    write_rows(out, &["t", "value"], rows)
}

/// Writes `t_enter,t_exit` rows of a visit list.
pub fn write_visits<W: Write>(mut out: W, visits: &Visits, provenance: &[(&str, String)]) -> Result<(), IoError> {
    provenance_line(&mut out, provenance)?;
    let rows = visits.intervals.iter().map(|(a, b)| vec![fmt_f64(*a), fmt_f64(*b)]);
    write_rows(out, &["t_enter", "t_exit"], rows)
}

/// Writes `lo,hi,mass,density` rows of a histogram.
pub fn write_histogram<W: Write>(mut out: W, hist: &Histogram, provenance: &[(&str, String)]) -> Result<(), IoError> {
    let mut fields = provenance.to_vec();
    fields.push(("bins", hist.mass.len().to_string()));
    fields.push(("occupancy", fmt_f64(hist.occupancy())));
    provenance_line(&mut out, &fields)?;
    let dens = hist.density();
    let rows = hist.mass.iter().enumerate().map(|(k, m)| {
        let lo = hist.lo + k as f64 * hist.width;
        vec![fmt_f64(lo), fmt_f64(lo + hist.width), fmt_f64(*m), fmt_f64(dens[k])]
    });
    write_rows(out, &["lo", "hi", "mass", "density"], rows)
}

/// A least-squares line y ≈ slope·x + intercept through tabulated points.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Regression {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

impl Regression {
    pub fn fit(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let slope = crate::patterson::least_squares_slope(&xs, &ys);
        let n = xs.len() as f64;
        let intercept = (ys.iter().sum::<f64>() - slope * xs.iter().sum::<f64>()) / n;
        Regression { xs, ys, slope, intercept }
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.xs.iter().zip(&self.ys).map(|(x, y)| y - (self.slope * x + self.intercept)).collect()
    }
}

impl From<&BoxDimension> for Regression {
    fn from(b: &BoxDimension) -> Self {
        let xs = b.radii.iter().map(|r| -r.ln()).collect();
        let ys = b.counts.iter().map(|&c| (c as f64).ln()).collect();
        Regression::fit(xs, ys)
    }
}

/// Writes `x,y,fitted,residual` rows with the fit range in the provenance line.
pub fn write_regression<W: Write>(mut out: W, reg: &Regression, provenance: &[(&str, String)]) -> Result<(), IoError> {
    let lo = reg.xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = reg.xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut fields = provenance.to_vec();
    fields.extend([
        ("slope", fmt_f64(reg.slope)),
        ("intercept", fmt_f64(reg.intercept)),
        ("x_min", fmt_f64(lo)),
        ("x_max", fmt_f64(hi)),
    ]);
    provenance_line(&mut out, &fields)?;
    let res = reg.residuals();
    let rows = (0..reg.xs.len()).map(|i| {
        vec![fmt_f64(reg.xs[i]), fmt_f64(reg.ys[i]), fmt_f64(reg.ys[i] - res[i]), fmt_f64(res[i])]
    });
    write_rows(out, &["x", "y", "fitted", "residual"], rows)
}

//! Text form of disk-pair tables: decimal strings so values round-trip exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Disk, DiskPair};
use crate::error::SchottkyError;

/// One `[[pairs]]` row of a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRow {
    pub center1: String,
    pub radius1: String,
    pub center2: String,
    pub radius2: String,
}

fn fmt_real(x: f64) -> String {
    format!("{x:?}")
}

/// Formats a complex number as `re` or `re+imi` / `re-imi`.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        fmt_real(z.re)
    } else if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", fmt_real(z.re), fmt_real(-z.im))
    } else {
        format!("{}+{}i", fmt_real(z.re), fmt_real(z.im))
    }
}

fn parse_real(s: &str) -> Result<f64, SchottkyError> {
    s.trim().parse::<f64>().map_err(|_| SchottkyError::Table(format!("not a decimal number: {s:?}")))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (exponents allowed).
pub fn parse_complex(s: &str) -> Result<Complex64, SchottkyError> {
    let t = s.trim().replace(' ', "");
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not part of an exponent or leading
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let ch = bytes[idx];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let im_str = &body[idx..];
                let im = if im_str == "+" || im_str == "-" { parse_real(&format!("{im_str}1"))? } else { parse_real(im_str)? };
                Ok(Complex64::new(parse_real(&body[..idx])?, im))
            }
            None => {
                let im = if body.is_empty() || body == "+" || body == "-" { parse_real(&format!("{body}1"))? } else { parse_real(body)? };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        Ok(Complex64::new(parse_real(&t)?, 0.0))
    }
}

impl PairRow {
    pub fn from_pair(p: &DiskPair) -> Self {
        PairRow {
            center1: format_complex(p.from.center),
            radius1: fmt_real(p.from.radius),
            center2: format_complex(p.to.center),
            radius2: fmt_real(p.to.radius),
        }
    }

    pub fn to_pair(&self) -> Result<DiskPair, SchottkyError> {
        Ok(DiskPair {
            from: Disk::new(parse_complex(&self.center1)?, parse_real(&self.radius1)?),
            to: Disk::new(parse_complex(&self.center2)?, parse_real(&self.radius2)?),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Table {
    pairs: Vec<PairRow>,
}

/// Serialises disk pairs as a TOML document with a `[[pairs]]` array.
pub fn pairs_to_toml(pairs: &[DiskPair]) -> String {
    let t = Table { pairs: pairs.iter().map(PairRow::from_pair).collect() };
    toml::to_string(&t).expect("pair table serialises")
}

/// Parses a TOML document holding only a `[[pairs]]` array.
pub fn pairs_from_toml(text: &str) -> Result<Vec<DiskPair>, SchottkyError> {
    let t: Table = toml::from_str(text).map_err(|e| SchottkyError::Table(e.to_string()))?;
    t.pairs.iter().map(PairRow::to_pair).collect()
}

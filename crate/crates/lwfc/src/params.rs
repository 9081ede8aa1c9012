//! Plain-text parameter files: one `key=value` per line, `#` comments and
//! blank lines ignored. Floats are written with 17 significant digits so
//! they read back exactly.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use lwfc_core::clip::ErrorBreakdown;
use lwfc_core::{ActivationModel, ClipRange, DesignedQuantizer};

use crate::error::{Error, ParamError};

/// `{:.16e}`: 17 significant digits, enough for any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct Block {
    values: HashMap<String, String>,
}

impl Block {
    fn parse(text: &str, allowed: &[&'static str]) -> Result<Self, ParamError> {
        let mut values = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (k, v) = s.split_once('=').ok_or(ParamError::Syntax { line })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(ParamError::Syntax { line });
            }
            if !allowed.contains(&k) {
                return Err(ParamError::Unknown {
                    line,
                    key: k.to_string(),
                });
            }
            if values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(ParamError::Duplicate {
                    line,
                    key: k.to_string(),
                });
            }
        }
        Ok(Self { values })
    }

    fn raw(&self, key: &'static str) -> Result<&str, ParamError> {
        self.values.get(key).map(String::as_str).ok_or(ParamError::Missing(key))
    }

    fn get<T: FromStr>(&self, key: &'static str) -> Result<T, ParamError> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| ParamError::Value {
            key,
            value: v.to_string(),
        })
    }

    fn list(&self, key: &'static str) -> Result<Vec<f64>, ParamError> {
        let v = self.raw(key)?;
        v.split(',')
            .map(|item| {
                item.trim().parse().map_err(|_| ParamError::Value {
                    key,
                    value: v.to_string(),
                })
            })
            .collect()
    }
}

fn line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}={value}");
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",")
}

pub fn model_to_string(m: &ActivationModel) -> String {
    let mut s = String::new();
    line(&mut s, "lambda", fmt_f64(m.lambda()));
    line(&mut s, "mu", fmt_f64(m.mu()));
    line(&mut s, "kappa", fmt_f64(m.kappa()));
    line(&mut s, "leak", fmt_f64(m.leak()));
    s
}

pub fn model_from_str(text: &str) -> Result<ActivationModel, ParamError> {
    let b = Block::parse(text, &["lambda", "mu", "kappa", "leak"])?;
    Ok(ActivationModel::new(
        b.get("lambda")?,
        b.get("mu")?,
        b.get("kappa")?,
        b.get("leak")?,
    )?)
}

/// Output of the statistics pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsSummary {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
}

pub fn stats_to_string(s: &StatsSummary) -> String {
    let mut out = String::new();
    line(&mut out, "count", s.count);
    line(&mut out, "mean", fmt_f64(s.mean));
    line(&mut out, "variance", fmt_f64(s.variance));
    out
}

pub fn stats_from_str(text: &str) -> Result<StatsSummary, ParamError> {
    let b = Block::parse(text, &["count", "mean", "variance"])?;
    Ok(StatsSummary {
        count: b.get("count")?,
        mean: b.get("mean")?,
        variance: b.get("variance")?,
    })
}

/// An optimized clipping range and its errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSummary {
    pub n_levels: usize,
    pub range: ClipRange,
    pub errors: ErrorBreakdown,
}

pub fn range_to_string(r: &RangeSummary) -> String {
    let mut s = String::new();
    line(&mut s, "levels", r.n_levels);
    line(&mut s, "c_min", fmt_f64(r.range.c_min()));
    line(&mut s, "c_max", fmt_f64(r.range.c_max()));
    line(&mut s, "e_clip", fmt_f64(r.errors.e_clip));
    line(&mut s, "e_quant", fmt_f64(r.errors.e_quant));
    line(&mut s, "e_tot", fmt_f64(r.errors.e_tot));
    s
}

pub fn range_from_str(text: &str) -> Result<RangeSummary, ParamError> {
    let b = Block::parse(text, &["levels", "c_min", "c_max", "e_clip", "e_quant", "e_tot"])?;
    Ok(RangeSummary {
        n_levels: b.get("levels")?,
        range: ClipRange::new(b.get("c_min")?, b.get("c_max")?)?,
        errors: ErrorBreakdown::new(b.get("e_quant")?, b.get("e_clip")?),
    })
}

/// A designed quantizer with the settings it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantFile {
    pub quantizer: DesignedQuantizer,
    pub rate_lambda: f64,
}

pub fn quant_to_string(q: &QuantFile) -> String {
    let r = q.quantizer.range();
    let mut s = String::new();
    line(&mut s, "levels", q.quantizer.n_levels());
    line(&mut s, "c_min", fmt_f64(r.c_min()));
    line(&mut s, "c_max", fmt_f64(r.c_max()));
    line(&mut s, "rate_lambda", fmt_f64(q.rate_lambda));
    line(&mut s, "pinned", q.quantizer.is_pinned());
    line(&mut s, "recon", join(q.quantizer.recon_levels()));
    line(&mut s, "thresholds", join(q.quantizer.thresholds()));
    s
}

pub fn quant_from_str(text: &str) -> Result<QuantFile, ParamError> {
    let b = Block::parse(
        text,
        &["levels", "c_min", "c_max", "rate_lambda", "pinned", "recon", "thresholds"],
    )?;
    let n: usize = b.get("levels")?;
    let range = ClipRange::new(b.get("c_min")?, b.get("c_max")?)?;
    let recon = b.list("recon")?;
    if recon.len() != n {
        return Err(ParamError::Value {
            key: "recon",
            value: format!("{} values for {n} levels", recon.len()),
        });
    }
    let quantizer = DesignedQuantizer::new(recon, b.list("thresholds")?, range)?;
    let pinned: bool = b.get("pinned")?;
    if pinned != quantizer.is_pinned() {
        return Err(ParamError::Value {
            key: "pinned",
            value: pinned.to_string(),
        });
    }
    Ok(QuantFile {
        quantizer,
        rate_lambda: b.get("rate_lambda")?,
    })
}

fn read_text(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Reads a parameter file with one of the `*_from_str` parsers.
pub fn load<T>(path: &Path, parse: fn(&str) -> Result<T, ParamError>) -> Result<T, Error> {
    parse(&read_text(path)?).map_err(|source| Error::Params {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

//! Plug-in entropy estimates with finite-sample error certificates.
//!
//! If the data are iid from some `μ` with `H_α(μ) ≤ h`, then with probability
//! at least `1 − δ`
//!
//! ```text
//! |H(μ) − H(μ̂_n)| ≤ (2α^α + h + H_α(μ̂_n))^{1/α} · r_{δ/2}^{1 − 1/α},
//! ```
//!
//! where `r_{δ/2}` is the empirical `ℓ1` radius at confidence `δ/2`, provided
//! `n ≥ 2 log(4/δ)`. Every quantity on the right is computable from the sample
//! once `α` and `h` are fixed.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{check_probability, ckw_l1_radius, dimfree_bound, BoundBreakdown};
use crate::dist::{entropy, EmpiricalMeasure, Symbol};
use crate::error::{Error, Result};
use crate::moments::{h_alpha, MAX_ALPHA};
use crate::numfmt::Float;

/// `H(μ̂_n)` in nats.
pub fn plug_in_entropy(emp: &EmpiricalMeasure) -> f64 {
    entropy(emp)
}

/// Smallest sample size accepted at confidence `1 − δ`: `⌈2 log(4/δ)⌉`.
pub fn min_samples(delta: f64) -> Result<u64> {
    check_probability("delta", delta)?;
    Ok((2.0 * (4.0 / delta).ln()).ceil() as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCertificate {
    pub estimate: f64,
    pub radius: f64,
    pub alpha: f64,
    pub h: f64,
    pub delta: f64,
    pub n: u64,
    pub breakdown: BoundBreakdown,
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    estimate: Float,
    radius: Float,
    alpha: Float,
    h: Float,
    delta: Float,
    n: u64,
    terms: Vec<(&'a str, Float)>,
    preconditions: Vec<(&'a str, bool)>,
}

impl EntropyCertificate {
    /// The interval `[estimate − radius, estimate + radius]`, clipped at zero.
    pub fn interval(&self) -> (f64, f64) {
        (
            (self.estimate - self.radius).max(0.0),
            self.estimate + self.radius,
        )
    }

    pub(crate) fn to_json_value(&self) -> serde_json::Value {
        let json = CertificateJson {
            estimate: self.estimate.into(),
            radius: self.radius.into(),
            alpha: self.alpha.into(),
            h: self.h.into(),
            delta: self.delta.into(),
            n: self.n,
            terms: self
                .breakdown
                .terms
                .iter()
                .map(|(l, v)| (l.as_str(), Float(*v)))
                .collect(),
            preconditions: self
                .breakdown
                .preconditions
                .iter()
                .map(|(l, ok)| (l.as_str(), *ok))
                .collect(),
        };
        serde_json::to_value(json).expect("certificate fields are serializable")
    }

    /// Single-line JSON object.
    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }
}

fn check_inputs(alpha: f64, h: f64, delta: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha <= MAX_ALPHA) {
        return Err(Error::OutOfDomain {
            name: "alpha",
            value: alpha,
            expected: "1 < alpha <= 64",
        });
    }
    if !(h >= 0.0 && h.is_finite()) {
        return Err(Error::OutOfDomain {
            name: "h",
            value: h,
            expected: "finite h >= 0",
        });
    }
    check_probability("delta", delta)
}

/// Certificate for the plug-in estimate at moment order `alpha`, moment bound
/// `h` and confidence `1 − delta`.
pub fn certificate(
    emp: &EmpiricalMeasure,
    alpha: f64,
    h: f64,
    delta: f64,
) -> Result<EntropyCertificate> {
    check_inputs(alpha, h, delta)?;
    let n = emp.n();
    let threshold = 2.0 * (4.0 / delta).ln();
    if (n as f64) < threshold {
        return Err(Error::InsufficientSamples {
            n,
            min_n: min_samples(delta)?,
            delta,
        });
    }

    let l1 = ckw_l1_radius(emp, delta / 2.0)?;
    let empirical_moment = h_alpha(emp, alpha)?.value;
    let radius = dimfree_bound(l1.value, h, empirical_moment, alpha)?.tight;
    let alpha_power = 2.0 * alpha.powf(alpha);
    let moment_factor = (alpha_power + h + empirical_moment).powf(1.0 / alpha);

    let breakdown = BoundBreakdown {
        name: "entropy_certificate".into(),
        value: radius,
        terms: vec![
            ("2*alpha^alpha".into(), alpha_power),
            ("h".into(), h),
            ("H_alpha(empirical)".into(), empirical_moment),
            ("moment_factor".into(), moment_factor),
            ("l1_mass_term".into(), l1.terms[0].1),
            ("l1_confidence_term".into(), l1.terms[1].1),
            ("l1_radius".into(), l1.value),
        ],
        preconditions: vec![
            ("n >= 2*log(4/delta)".into(), true),
            ("1 < alpha <= 64".into(), true),
            ("h >= 0".into(), true),
            ("0 < delta < 1".into(), true),
        ],
    };
    Ok(EntropyCertificate {
        estimate: plug_in_entropy(emp),
        radius,
        alpha,
        h,
        delta,
        n,
        breakdown,
    })
}

/// A certificate chosen over a grid of moment orders.
#[derive(Debug, Clone)]
pub struct AlphaSelection {
    pub certificate: EntropyCertificate,
    /// `(alpha, h, radius)` for every grid point, in grid order.
    pub candidates: Vec<(f64, f64, f64)>,
}

/// Certificate with the smallest radius over `alpha_grid`, with `h` supplied
/// per order by `h_of_alpha`.
pub fn certificate_best_alpha<F>(
    emp: &EmpiricalMeasure,
    h_of_alpha: F,
    delta: f64,
    alpha_grid: &[f64],
) -> Result<AlphaSelection>
where
    F: Fn(f64) -> Result<f64>,
{
    if alpha_grid.is_empty() {
        return Err(Error::Degenerate("empty alpha grid".into()));
    }
    let mut best: Option<EntropyCertificate> = None;
    let mut candidates = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let cert = certificate(emp, alpha, h_of_alpha(alpha)?, delta)?;
        candidates.push((alpha, cert.h, cert.radius));
        if best.as_ref().is_none_or(|b| cert.radius < b.radius) {
            best = Some(cert);
        }
    }
    Ok(AlphaSelection {
        certificate: best.expect("grid is nonempty"),
        candidates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// One symbol per line.
    Samples,
    /// `symbol<TAB>count` per line.
    Counts,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "samples" => Ok(Format::Samples),
            "counts" => Ok(Format::Counts),
            other => Err(Error::Unsupported(format!(
                "input format '{other}' (expected samples or counts)"
            ))),
        }
    }
}

fn parse_symbol(field: &str, line: usize) -> Result<Symbol> {
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a nonnegative integer symbol, found '{field}'"),
    })
}

fn parse_count(field: &str, line: usize) -> Result<u64> {
    if let Some(rest) = field.strip_prefix('-') {
        if rest.parse::<u64>().is_ok() {
            return Err(Error::Parse {
                line,
                message: format!("negative count {field}"),
            });
        }
    }
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a nonnegative integer count, found '{field}'"),
    })
}

/// Reads one symbol per line. Blank lines are skipped.
pub fn parse_samples<R: BufRead>(reader: R) -> Result<EmpiricalMeasure> {
    let mut samples = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let field = line.trim();
        if field.is_empty() {
            continue;
        }
        samples.push(parse_symbol(field, i + 1)?);
    }
    EmpiricalMeasure::from_samples(&samples)
}

/// Reads `symbol<TAB>count` lines. Blank lines are skipped.
pub fn parse_counts<R: BufRead>(reader: R) -> Result<EmpiricalMeasure> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [symbol, count] = fields[..] else {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected 'symbol<TAB>count', found {} fields", fields.len()),
            });
        };
        pairs.push((parse_symbol(symbol, i + 1)?, parse_count(count, i + 1)?));
    }
    EmpiricalMeasure::from_counts(pairs)
}

pub fn ingest<P: AsRef<Path>>(path: P, format: Format) -> Result<EmpiricalMeasure> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        Format::Samples => parse_samples(reader),
        Format::Counts => parse_counts(reader),
    }
}

/// Writes `emp` in the counts format read by [`parse_counts`].
pub fn write_counts<W: Write>(emp: &EmpiricalMeasure, mut writer: W) -> std::io::Result<()> {
    for (symbol, count) in emp.counts() {
        writeln!(writer, "{symbol}\t{count}")?;
    }
    Ok(())
}

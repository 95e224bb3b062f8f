use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Family, Settings};
use crate::certify::certificate;
use crate::dist::{entropy, sample_empirical, trial_seed, Sampleable};
use crate::error::{Error, Result};
use crate::moments::h_alpha;
use crate::numfmt::Float;

/// Outcome of repeated certificates on fresh samples from a known family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub trials: u64,
    pub violations: u64,
    pub violation_rate: Float,
    pub delta: Float,
    pub radius_mean: Float,
    pub radius_stddev: Float,
    pub seed: u64,
    pub family: String,
    pub n: u64,
    pub alpha: Float,
    pub h: Float,
    pub entropy: Float,
}

/// Draws `trials` samples of size `n` from `family`, certifies each with
/// `h = H_α(family)`, and counts trials where the true entropy falls outside
/// the certified interval. Trial `t` uses the seed `trial_seed(seed, t)`, so
/// the report does not depend on scheduling.
pub fn coverage(
    family: &Family,
    n: u64,
    alpha: f64,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<CoverageReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument {
            key: "trials".into(),
            message: "need at least one trial".into(),
        });
    }
    let dist = family.distribution()?;
    let truth = entropy(&dist);
    let h = h_alpha(&dist, alpha)?.value;
    let sampler = dist.sampler();
    let n_usize = usize::try_from(n).map_err(|_| Error::InvalidArgument {
        key: "n".into(),
        message: format!("{n} is too large"),
    })?;

    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
            let emp = sample_empirical(&sampler, n_usize, &mut rng)?;
            let cert = certificate(&emp, alpha, h, delta)?;
            Ok(((truth - cert.estimate).abs() > cert.radius, cert.radius))
        })
        .collect::<Result<Vec<(bool, f64)>>>()?;

    let violations = outcomes.iter().filter(|(v, _)| *v).count() as u64;
    let count = outcomes.len() as f64;
    let mean = outcomes.iter().map(|(_, r)| r).sum::<f64>() / count;
    let variance = if outcomes.len() > 1 {
        outcomes
            .iter()
            .map(|(_, r)| (r - mean).powi(2))
            .sum::<f64>()
            / (count - 1.0)
    } else {
        0.0
    };
    Ok(CoverageReport {
        trials,
        violations,
        violation_rate: Float(violations as f64 / count),
        delta: Float(delta),
        radius_mean: Float(mean),
        radius_stddev: Float(variance.sqrt()),
        seed,
        family: family.name().into(),
        n,
        alpha: Float(alpha),
        h: Float(h),
        entropy: Float(truth),
    })
}

/// JSON coverage report; see [`coverage`].
pub fn run_coverage(settings: &Settings) -> Result<String> {
    let family = Family::from_settings(settings)?;
    let report = coverage(
        &family,
        settings.get_or("n", 1000)?,
        settings.get_or("alpha", 2.0)?,
        settings.get_or("delta", 0.1)?,
        settings.get_or("trials", 500)?,
        settings.seed()?,
    )?;
    let json = serde_json::to_string(&report).expect("report serializes");
    Ok(format!("{json}\n"))
}

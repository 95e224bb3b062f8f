//! Expected-error rate curves as functions of the sample size.

use std::f64::consts::E;

use super::{check_alpha_above_one, ct_formula};
use crate::dist::Distribution;
use crate::error::{ensure_finite, Error, Result};
use crate::moments::{h_alpha, MAX_ALPHA};
use crate::optimize::grid_then_golden;

/// Constant in the minimax-rate comparison curve when none is given.
pub const DEFAULT_WY_C: f64 = 2.0;

/// Points of the logarithmic `α − 1` grid scanned before refinement.
pub const ALPHA_GRID_POINTS: usize = 128;
const ALPHA_MIN_OFFSET: f64 = 1e-3;
const ALPHA_TOLERANCE: f64 = 1e-6;

fn check_n(n: u64) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "n",
            value: 0.0,
            expected: "n >= 1",
        })
    }
}

/// `Λ_n(μ) = 2 Σ_{μ(j) < 1/n} μ(j) + n^{−1/2} Σ_{μ(j) ≥ 1/n} √μ(j)`, an upper
/// bound on `E ∥μ̂_n − μ∥_1`.
pub fn lambda_n<D: Distribution + ?Sized>(dist: &D, n: u64) -> Result<f64> {
    check_n(n)?;
    let threshold = 1.0 / n as f64;
    let light = dist.sum_below(threshold, &|m| m);
    let heavy = dist.sum_at_least(threshold, &f64::sqrt);
    ensure_finite(2.0 * light + heavy / (n as f64).sqrt(), "Lambda_n")
}

fn gap_from(lambda: f64, moment_term: f64, alpha: f64) -> f64 {
    let a = alpha.powf(alpha);
    (a / E + 2.0 * a + moment_term).powf(1.0 / alpha) * lambda.powf(1.0 - 1.0 / alpha)
}

/// `(α^α/e + 2α^α + 2 H_α(μ))^{1/α} Λ_n(μ)^{1−1/α}`, an upper bound on
/// `E |H(μ) − H(μ̂_n)|`.
pub fn expected_gap_bound<D: Distribution + ?Sized>(dist: &D, n: u64, alpha: f64) -> Result<f64> {
    check_alpha_above_one(alpha)?;
    let lambda = lambda_n(dist, n)?;
    let moment = h_alpha(dist, alpha)?.value;
    ensure_finite(gap_from(lambda, 2.0 * moment, alpha), "expected gap bound")
}

/// `(d + D)/n + min(C log(d + D)/√n, log n/√n)`.
pub fn wy_bound(d: u64, big_d: u64, n: u64, c: f64) -> Result<f64> {
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::OutOfDomain {
            name: "C",
            value: c,
            expected: "finite C > 1",
        });
    }
    for (name, v) in [("d", d), ("D", big_d), ("n", n)] {
        if v == 0 {
            return Err(Error::OutOfDomain {
                name,
                value: 0.0,
                expected: ">= 1",
            });
        }
    }
    let support = (d + big_d) as f64;
    let n = n as f64;
    let root = n.sqrt();
    ensure_finite(
        support / n + (c * support.ln() / root).min(n.ln() / root),
        "minimax rate curve",
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOptimum {
    pub alpha: f64,
    pub value: f64,
    pub lambda: f64,
}

/// Twice the moment bound entering the rate objective: `2 max{α, log K}^α +
/// 2 (α/e)^α` for a support bound `K`, otherwise `2 H_α(μ)`.
fn moment_term<D: Distribution + ?Sized>(
    dist: &D,
    support_bound: Option<u64>,
    alpha: f64,
) -> Result<f64> {
    match support_bound {
        Some(k) => {
            let log_k = (k as f64).ln();
            Ok(2.0 * log_k.max(alpha).powf(alpha) + 2.0 * (alpha / E).powf(alpha))
        }
        None => Ok(2.0 * h_alpha(dist, alpha)?.value),
    }
}

fn check_support_bound<D: Distribution + ?Sized>(
    dist: &D,
    support_bound: Option<u64>,
) -> Result<()> {
    match (support_bound, dist.support_size()) {
        (Some(k), _) if k < 2 => Err(Error::OutOfDomain {
            name: "K",
            value: k as f64,
            expected: "K >= 2",
        }),
        (Some(k), Some(s)) if s > k => Err(Error::InvalidDistribution(format!(
            "support of size {s} exceeds the declared bound K = {k}"
        ))),
        (Some(_), None) => Err(Error::InvalidDistribution(
            "infinite support cannot satisfy a finite support bound".into(),
        )),
        _ => Ok(()),
    }
}

/// The rate objective at a single `α`.
pub fn our_rate_objective<D: Distribution + ?Sized>(
    dist: &D,
    support_bound: Option<u64>,
    n: u64,
    alpha: f64,
) -> Result<f64> {
    check_alpha_above_one(alpha)?;
    check_support_bound(dist, support_bound)?;
    let lambda = lambda_n(dist, n)?;
    let m = moment_term(dist, support_bound, alpha)?;
    ensure_finite(gap_from(lambda, m, alpha), "rate objective")
}

/// The `α − 1` grid: log-spaced from `10^{−3}` to `63`.
fn alpha_grid() -> Vec<f64> {
    let lo = ALPHA_MIN_OFFSET.log10();
    let hi = (MAX_ALPHA - 1.0).log10();
    (0..ALPHA_GRID_POINTS)
        .map(|i| 1.0 + 10f64.powf(lo + (hi - lo) * i as f64 / (ALPHA_GRID_POINTS - 1) as f64))
        .collect()
}

/// Minimizes the expected-gap bound over `α ∈ (1, 64]`: a 128-point log grid
/// in `α − 1`, refined by golden-section search around the best grid point.
///
/// With a support bound `K` the unknown `H_α` is replaced by the extremal
/// envelope `max{α, log K}^α + (α/e)^α`; without one the exact `H_α` of `dist`
/// is used.
pub fn our_rate_bound<D: Distribution + ?Sized>(
    dist: &D,
    support_bound: Option<u64>,
    n: u64,
) -> Result<RateOptimum> {
    check_support_bound(dist, support_bound)?;
    let lambda = lambda_n(dist, n)?;
    let objective = |alpha: f64| match moment_term(dist, support_bound, alpha) {
        Ok(m) => {
            let v = gap_from(lambda, m, alpha);
            if v.is_finite() {
                v
            } else {
                f64::NAN
            }
        }
        Err(_) => f64::NAN,
    };
    let best = grid_then_golden(objective, &alpha_grid(), ALPHA_TOLERANCE, "alpha search")?;
    Ok(RateOptimum {
        alpha: best.x,
        value: ensure_finite(best.value, "optimized rate")?,
        lambda,
    })
}

/// `Λ_n log(K / Λ_n)`.
pub fn ct_rate_bound<D: Distribution + ?Sized>(dist: &D, support_size: u64, n: u64) -> Result<f64> {
    if dist.support_size().is_none() {
        return Err(Error::Unsupported(
            "the Cover-Thomas rate needs a finite support".into(),
        ));
    }
    let lambda = lambda_n(dist, n)?;
    let k = support_size as f64;
    if lambda >= k {
        return Err(Error::Degenerate(format!(
            "Lambda_n = {lambda} is not below the support size {support_size}"
        )));
    }
    ensure_finite(ct_formula(lambda, k), "Cover-Thomas rate")
}

//! Deviation bounds for the entropy functional, expected-rate curves, minimax
//! envelopes and the adversarial constructions behind the lower bounds.
//!
//! Bounds that combine several summands return a [`BoundBreakdown`] recording
//! each summand and each precondition that was checked, so the value can be
//! audited term by term.

mod minimax;
mod rates;

pub use minimax::{
    birthday_no_collision, default_epsilon_grid, minimax_lower_value, minimax_upper,
    no_emp_construction, plug_in_risk_bound, sandwich_lower_bound, MinimaxLower, NoEmpPair,
    SandwichDeficit,
};
pub use rates::{
    ct_rate_bound, expected_gap_bound, lambda_n, our_rate_bound, our_rate_objective, wy_bound,
    RateOptimum, ALPHA_GRID_POINTS, DEFAULT_WY_C,
};

use crate::dist::EmpiricalMeasure;
use crate::error::{ensure_finite, Error, Result};
use crate::moments::MAX_ALPHA;

/// A bound value together with its summands and checked preconditions.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundBreakdown {
    pub name: String,
    pub value: f64,
    pub terms: Vec<(String, f64)>,
    pub preconditions: Vec<(String, bool)>,
}

impl BoundBreakdown {
    /// True when every recorded precondition holds.
    pub fn is_valid(&self) -> bool {
        self.preconditions.iter().all(|(_, ok)| *ok)
    }

    /// Value of the summand named `label`.
    pub fn term(&self, label: &str) -> Option<f64> {
        self.terms.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name,
            value,
            expected: "strictly between 0 and 1",
        })
    }
}

pub(crate) fn check_alpha_above_one(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha <= MAX_ALPHA {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "alpha",
            value: alpha,
            expected: "1 < alpha <= 64",
        })
    }
}

/// High-probability radius for `∥μ − μ̂_n∥_1`:
/// `(2/√n) Σ √μ̂(j) + 6 √(log(2/δ) / (2n))`.
pub fn ckw_l1_radius(emp: &EmpiricalMeasure, delta: f64) -> Result<BoundBreakdown> {
    check_probability("delta", delta)?;
    let n = emp.n() as f64;
    // Sorted so the sum depends only on the multiset of counts.
    let mut counts: Vec<u64> = emp.counts().map(|(_, c)| c).collect();
    counts.sort_unstable();
    let root_sum: f64 = counts.iter().map(|&c| (c as f64 / n).sqrt()).sum();
    let mass_term = 2.0 / n.sqrt() * root_sum;
    let confidence_term = 6.0 * ((2.0 / delta).ln() / (2.0 * n)).sqrt();
    let value = ensure_finite(mass_term + confidence_term, "l1 radius")?;
    Ok(BoundBreakdown {
        name: "ckw_l1_radius".into(),
        value,
        terms: vec![
            ("mass_term".into(), mass_term),
            ("confidence_term".into(), confidence_term),
        ],
        preconditions: vec![("0 < delta < 1".into(), true)],
    })
}

/// `t log(d / t)` with `0 log(d/0) = 0`; shared by [`ct_bound`] and the
/// Cover-Thomas rate curve.
pub(crate) fn ct_formula(t: f64, d: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * (d / t).ln()
    }
}

/// Continuity bound `|H(μ) − H(ν)| ≤ t log(d / t)` for distributions on `d`
/// symbols at distance `t ≤ 1/2`. The distance convention (total variation or
/// `ℓ1`) is the caller's.
pub fn ct_bound(distance: f64, d: u64) -> Result<f64> {
    if !(0.0..=0.5).contains(&distance) {
        return Err(Error::OutOfDomain {
            name: "distance",
            value: distance,
            expected: "0 <= distance <= 1/2",
        });
    }
    if d < 2 {
        return Err(Error::OutOfDomain {
            name: "d",
            value: d as f64,
            expected: "d >= 2",
        });
    }
    ensure_finite(ct_formula(distance, d as f64), "Cover-Thomas bound")
}

/// Both forms of the dimension-free continuity bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimfreeBound {
    /// `ℓ1^{1−1/α} (2α^α + h_μ + h_ν)^{1/α}`
    pub tight: f64,
    /// `ℓ1^{1−1/α} (2α + h_μ^{1/α} + h_ν^{1/α})`
    pub loose: f64,
}

/// `|H(μ) − H(ν)|` in terms of `∥μ − ν∥_1` and the `α`-moments of both
/// distributions, valid when `∥μ − ν∥_∞ < 1/2` (not checked here).
pub fn dimfree_bound(l1: f64, h_mu: f64, h_nu: f64, alpha: f64) -> Result<DimfreeBound> {
    check_alpha_above_one(alpha)?;
    for (name, value) in [("l1", l1), ("h_mu", h_mu), ("h_nu", h_nu)] {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::OutOfDomain {
                name,
                value,
                expected: "finite and nonnegative",
            });
        }
    }
    let inv = 1.0 / alpha;
    let scale = l1.powf(1.0 - inv);
    let tight = scale * (2.0 * alpha.powf(alpha) + h_mu + h_nu).powf(inv);
    let loose = scale * (2.0 * alpha + h_mu.powf(inv) + h_nu.powf(inv));
    Ok(DimfreeBound {
        tight: ensure_finite(tight, "dimension-free bound")?,
        loose: ensure_finite(loose, "dimension-free bound")?,
    })
}

//! Information moments `H_α(μ) = Σ μ(j) |log μ(j)|^α` and the largest value
//! they can take on a support of size `K`.

use std::f64::consts::E;

use crate::dist::{moment_term, Distribution, Pmf};
use crate::error::{ensure_finite, Error, Result};
use crate::optimize::grid_then_golden;

/// Largest moment order accepted anywhere in the crate; `α^α` overflows soon
/// after.
pub const MAX_ALPHA: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentProfile {
    pub alpha: f64,
    pub value: f64,
}

fn check_alpha(alpha: f64, min: f64, inclusive: bool) -> Result<()> {
    let above = if inclusive { alpha >= min } else { alpha > min };
    if above && alpha <= MAX_ALPHA {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "alpha",
            value: alpha,
            expected: if inclusive {
                "1 <= alpha <= 64"
            } else {
                "0 < alpha <= 64"
            },
        })
    }
}

/// `φ_α(z) = z (log 1/z)^α` on `[0, 1]`.
pub fn phi_alpha(z: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha, 0.0, false)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::OutOfDomain {
            name: "z",
            value: z,
            expected: "0 <= z <= 1",
        });
    }
    Ok(moment_term(z, alpha))
}

/// `(argmax, max)` of `φ_α`: `(e^{−α}, e^{−α} α^α)`.
pub fn phi_alpha_max(alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha, 0.0, false)?;
    let argmax = (-alpha).exp();
    Ok((argmax, (alpha / E).powf(alpha)))
}

/// `H_α` of any distribution, for `1 ≤ α ≤ 64`. Empirical measures use the
/// integer counts directly.
pub fn h_alpha<D: Distribution + ?Sized>(dist: &D, alpha: f64) -> Result<MomentProfile> {
    check_alpha(alpha, 1.0, true)?;
    let value = ensure_finite(dist.information_moment(alpha), "information moment")?;
    Ok(MomentProfile {
        alpha,
        value: value.max(0.0),
    })
}

/// `Σ w |log w|^α` for a nonnegative weight vector with entries in `[0, 1]`,
/// such as the pointwise difference `|μ − ν|` of two distributions.
pub fn h_alpha_weights(weights: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha, 1.0, true)?;
    let mut total = 0.0;
    for &w in weights {
        total += phi_alpha(w, alpha)?;
    }
    ensure_finite(total, "information moment of weights")
}

/// Envelope on `max { H_α(μ) : μ supported on K symbols }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxMomentBounds {
    pub lower: f64,
    pub upper: f64,
}

fn check_support(k: u64) -> Result<()> {
    if k >= 2 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "K",
            value: k as f64,
            expected: "K >= 2",
        })
    }
}

/// `lower = max{log K, α/e}^α`, `upper = max{log K, α}^α + (α/e)^α`.
pub fn max_alpha_entropy_bounds(k: u64, alpha: f64) -> Result<MaxMomentBounds> {
    check_support(k)?;
    check_alpha(alpha, 1.0, true)?;
    let log_k = (k as f64).ln();
    let lower = log_k.max(alpha / E).powf(alpha);
    let upper = log_k.max(alpha).powf(alpha) + (alpha / E).powf(alpha);
    Ok(MaxMomentBounds {
        lower: ensure_finite(lower, "max-moment lower bound")?,
        upper: ensure_finite(upper, "max-moment upper bound")?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaximizerShape {
    Uniform,
    /// One atom of mass `heavy`, the rest spread evenly.
    HeavyLight {
        heavy: f64,
    },
}

#[derive(Debug, Clone)]
pub struct MaxMoment {
    pub k: u64,
    pub alpha: f64,
    pub value: f64,
    pub shape: MaximizerShape,
    pub maximizer: Pmf,
    pub diagnostics: Vec<String>,
}

const HEAVY_GRID: usize = 512;
const HEAVY_TOLERANCE: f64 = 1e-10;
const TIE_TOLERANCE: f64 = 1e-12;

fn heavy_light_value(v: f64, k: u64, alpha: f64) -> f64 {
    let rest = (k - 1) as f64;
    moment_term(v, alpha) + rest * moment_term((1.0 - v) / rest, alpha)
}

fn heavy_light_pmf(v: f64, k: u64) -> Result<Pmf> {
    let light = (1.0 - v) / (k - 1) as f64;
    let mut masses = vec![light; k as usize];
    masses[0] = v;
    Pmf::new(masses)
}

/// Maximizes `H_α` over distributions on `K` symbols.
///
/// A maximizer is either uniform or has a single heavy atom `v ≥ e^{−(α−1)}`
/// with the remaining mass spread evenly. The heavy-light family is scanned on
/// a grid in `v`, refined by golden-section search, and compared with the
/// uniform value `(log K)^α`. Near-ties go to the uniform.
pub fn max_alpha_entropy_exact(k: u64, alpha: f64) -> Result<MaxMoment> {
    check_support(k)?;
    check_alpha(alpha, 1.0, true)?;
    if k > 1 << 24 {
        return Err(Error::Unsupported(format!(
            "K = {k} is too large to materialize the maximizer"
        )));
    }
    let uniform = (k as f64).ln().powf(alpha);
    let mut diagnostics = Vec::new();

    let lo = (-(alpha - 1.0)).exp();
    let hi = 1.0 - 1e-12;
    let heavy = if alpha > 1.0 && lo < hi {
        let grid: Vec<f64> = (0..=HEAVY_GRID)
            .map(|i| lo + (hi - lo) * i as f64 / HEAVY_GRID as f64)
            .collect();
        let found = grid_then_golden(
            |v| -heavy_light_value(v, k, alpha),
            &grid,
            HEAVY_TOLERANCE,
            "heavy-light search",
        )?;
        let value = ensure_finite(-found.value, "heavy-light objective")?;
        diagnostics.push(format!(
            "heavy-light search on [{lo:e}, {hi}]: v = {}, value = {value}, {} evaluations",
            found.x, found.evaluations
        ));
        Some((found.x, value))
    } else {
        diagnostics.push("heavy-light interval is empty; uniform only".into());
        None
    };

    match heavy {
        Some((v, value)) if value > uniform + TIE_TOLERANCE * uniform.max(1.0) => Ok(MaxMoment {
            k,
            alpha,
            value,
            shape: MaximizerShape::HeavyLight { heavy: v },
            maximizer: heavy_light_pmf(v, k)?,
            diagnostics,
        }),
        other => {
            if let Some((_, value)) = other {
                if (value - uniform).abs() <= TIE_TOLERANCE * uniform.max(1.0) {
                    diagnostics.push(format!(
                        "heavy-light value {value} ties the uniform value {uniform}; returning uniform"
                    ));
                }
            }
            Ok(MaxMoment {
                k,
                alpha,
                value: uniform,
                shape: MaximizerShape::Uniform,
                maximizer: Pmf::uniform(k as usize)?,
                diagnostics,
            })
        }
    }
}

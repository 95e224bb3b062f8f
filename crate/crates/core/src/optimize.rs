//! One-dimensional minimization: golden-section search, and a grid scan that
//! brackets the best grid point before refining it.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping when the
/// bracket is narrower than `tol`.
pub(crate) fn golden_section<F>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    context: &'static str,
) -> Result<Minimum>
where
    F: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::OptimizationFailed {
            context,
            diagnostics: format!("invalid bracket [{lo}, {hi}]"),
        });
    }
    let eval = |x: f64, evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            return Err(Error::OptimizationFailed {
                context,
                diagnostics: format!("objective is NaN at x = {x}"),
            });
        }
        Ok(v)
    };
    let mut evaluations = 0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut evaluations)?;
    let mut fd = eval(d, &mut evaluations)?;
    while (b - a).abs() > tol && evaluations < 10_000 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut evaluations)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut evaluations)?;
        }
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Ok(Minimum {
        x,
        value,
        evaluations,
    })
}

/// Evaluates `f` on `grid` (sorted ascending), then golden-section refines the
/// bracket around the best grid point. The result is never worse than the best
/// grid value.
pub(crate) fn grid_then_golden<F>(
    f: F,
    grid: &[f64],
    tol: f64,
    context: &'static str,
) -> Result<Minimum>
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (best, &best_value) = values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_nan())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::OptimizationFailed {
            context,
            diagnostics: format!("objective is NaN on all {} grid points", grid.len()),
        })?;
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let refined = golden_section(&f, lo, hi, tol, context)?;
    let evaluations = grid.len() + refined.evaluations;
    if refined.value < best_value {
        Ok(Minimum {
            evaluations,
            ..refined
        })
    } else {
        Ok(Minimum {
            x: grid[best],
            value: best_value,
            evaluations,
        })
    }
}

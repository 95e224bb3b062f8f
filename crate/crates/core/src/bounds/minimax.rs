//! Envelopes on the minimax risk of entropy estimation over moment classes,
//! and the constructions that witness the lower bounds.

use std::f64::consts::{E, LN_2};

use super::check_alpha_above_one;
use crate::dist::{entropy, kl_divergence, surprisal_term, AnalyticDistribution, Distribution};
use crate::error::{ensure_finite, Error, Result};
use crate::moments::MAX_ALPHA;

/// `{2^{−k} : 1 ≤ k ≤ 60}`.
pub fn default_epsilon_grid() -> Vec<f64> {
    (1..=60).map(|k| 0.5f64.powi(k)).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Degenerate("empty epsilon grid".into()));
    }
    match grid.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
        Some(&e) => Err(Error::OutOfDomain {
            name: "epsilon",
            value: e,
            expected: "0 < epsilon < 1",
        }),
        None => Ok(()),
    }
}

fn check_n_at_least(n: u64, min: u64) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "n",
            value: n as f64,
            expected: if min == 2 { "n >= 2" } else { "n >= 1" },
        })
    }
}

/// Minimizer of a grid search over the truncation level `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichDeficit {
    pub epsilon: f64,
    pub deficit: f64,
}

/// `min_ε Σ_{μ(i)<ε} μ(i) log(1/μ(i)) + log(1 + 1/(εn))` over `grid`; the
/// plug-in estimate satisfies `H(μ) − deficit ≤ E H(μ̂_n) ≤ H(μ)`.
pub fn sandwich_lower_bound<D: Distribution + ?Sized>(
    dist: &D,
    n: u64,
    grid: &[f64],
) -> Result<SandwichDeficit> {
    check_n_at_least(n, 1)?;
    check_grid(grid)?;
    let n = n as f64;
    let mut best = SandwichDeficit {
        epsilon: f64::NAN,
        deficit: f64::INFINITY,
    };
    for &eps in grid {
        let light = dist.sum_below(eps, &surprisal_term);
        let deficit = ensure_finite(light + (1.0 / (eps * n)).ln_1p(), "sandwich deficit")?;
        if deficit < best.deficit {
            best = SandwichDeficit {
                epsilon: eps,
                deficit,
            };
        }
    }
    Ok(best)
}

/// `log n/√n + min_ε (log 1/ε)^{1−α} h + log(1 + 1/(εn))`, an upper bound on
/// the expected error of the plug-in estimate when `H_α(μ) ≤ h`.
pub fn plug_in_risk_bound(h: f64, alpha: f64, n: u64, grid: &[f64]) -> Result<f64> {
    if !(h >= 0.0 && h.is_finite()) {
        return Err(Error::OutOfDomain {
            name: "h",
            value: h,
            expected: "finite h >= 0",
        });
    }
    if !(1.0..=MAX_ALPHA).contains(&alpha) {
        return Err(Error::OutOfDomain {
            name: "alpha",
            value: alpha,
            expected: "1 <= alpha <= 64",
        });
    }
    check_n_at_least(n, 1)?;
    check_grid(grid)?;
    let nf = n as f64;
    let truncation = grid
        .iter()
        .map(|&eps| (1.0 / eps).ln().powf(1.0 - alpha) * h + (1.0 / (eps * nf)).ln_1p())
        .fold(f64::INFINITY, f64::min);
    ensure_finite(nf.ln() / nf.sqrt() + truncation, "plug-in risk bound")
}

/// `(1 + log n)/√n + 2^{α−1} h / (log n)^{α−1}`.
pub fn minimax_upper(h: f64, alpha: f64, n: u64) -> Result<f64> {
    check_alpha_above_one(alpha)?;
    check_n_at_least(n, 2)?;
    let log_n = (n as f64).ln();
    let value =
        (1.0 + log_n) / (n as f64).sqrt() + 2f64.powf(alpha - 1.0) * h / log_n.powf(alpha - 1.0);
    ensure_finite(value, "minimax upper envelope")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxLower {
    /// Moment level of the hard class, `3^α (log n)^α`.
    pub h: f64,
    /// Entropy separation of the two hypotheses, `log n`.
    pub gap: f64,
    /// `h / (4 · 3^α (log n)^{α−1}) = (log n)/4`.
    pub bound: f64,
}

/// The minimax lower bound at sample size `n`: the class level `h` it needs
/// and the resulting risk floor.
pub fn minimax_lower_value(alpha: f64, n: u64) -> Result<MinimaxLower> {
    if !(alpha > 0.0 && alpha <= MAX_ALPHA) {
        return Err(Error::OutOfDomain {
            name: "alpha",
            value: alpha,
            expected: "0 < alpha <= 64",
        });
    }
    check_n_at_least(n, 2)?;
    let log_n = (n as f64).ln();
    let h = ensure_finite(3f64.powf(alpha) * log_n.powf(alpha), "minimax class level")?;
    Ok(MinimaxLower {
        h,
        gap: log_n,
        bound: log_n / 4.0,
    })
}

/// Largest `log S` for which `S` is materialized as an integer.
const MAX_LOG_S: f64 = 60.0 * LN_2;

/// Two distributions that no estimator can tell apart from `n` samples while
/// their entropies differ by at least `h/2`: a point mass `mu0`, and `mun`,
/// which keeps mass `1 − 1/(2n)` on the same atom and spreads `1/(2n)` evenly
/// over `s` fresh symbols.
#[derive(Debug, Clone)]
pub struct NoEmpPair {
    pub n: u64,
    pub h: f64,
    /// `(1 − 1/(2n)) log(1 − 1/(2n))`
    pub a_n: f64,
    /// `2n(h + a_n) − log(2n)`, the logarithm of `s` before rounding down.
    pub log_s: f64,
    pub s: u64,
    pub mu0: AnalyticDistribution,
    pub mun: AnalyticDistribution,
    pub kl: f64,
    pub entropy_mun: f64,
}

impl NoEmpPair {
    /// `|H(mu0) − H(mun)|`.
    pub fn entropy_gap(&self) -> f64 {
        (entropy(&self.mu0) - self.entropy_mun).abs()
    }

    /// Risk floor `h/(4e)` implied by the pair.
    pub fn risk_floor(&self) -> f64 {
        self.h / (4.0 * E)
    }
}

/// Builds the pair for class level `h > 1` and sample size `n`, checking
/// `KL(mu0 ‖ mun) ≤ 1/n` and `h/2 ≤ H(mun) ≤ h`.
pub fn no_emp_construction(h: f64, n: u64) -> Result<NoEmpPair> {
    if !(h > 1.0 && h.is_finite()) {
        return Err(Error::OutOfDomain {
            name: "h",
            value: h,
            expected: "finite h > 1",
        });
    }
    check_n_at_least(n, 1)?;
    let light_total = 1.0 / (2 * n) as f64;
    let heavy = 1.0 - light_total;
    let a_n = heavy * heavy.ln();
    let log_s = 2.0 * n as f64 * (h + a_n) - ((2 * n) as f64).ln();
    if log_s > MAX_LOG_S {
        return Err(Error::Unrepresentable { log_value: log_s });
    }
    let s = log_s.exp().floor();
    if s < 2.0 {
        return Err(Error::Degenerate(format!(
            "light block has {s} symbols for h = {h}, n = {n}; at least 2 are needed"
        )));
    }
    let s = s as u64;
    let mu0 = AnalyticDistribution::point_mass();
    let mun = AnalyticDistribution::two_level(heavy, s, light_total / s as f64)?;
    let kl = kl_divergence(&mu0, &mun)?;
    let entropy_mun = entropy(&mun);
    if kl > 1.0 / n as f64 {
        return Err(Error::Degenerate(format!(
            "KL = {kl} exceeds 1/n for n = {n}"
        )));
    }
    if !(h / 2.0..=h).contains(&entropy_mun) {
        return Err(Error::Degenerate(format!(
            "H(mun) = {entropy_mun} is outside [h/2, h] for h = {h}"
        )));
    }
    Ok(NoEmpPair {
        n,
        h,
        a_n,
        log_s,
        s,
        mu0,
        mun,
        kl,
        entropy_mun,
    })
}

/// Probability that `m` uniform draws from `k` symbols are all distinct,
/// `Π_{i<m} (1 − i/k)`; zero when `m > k`.
pub fn birthday_no_collision(m: u64, k: u64) -> f64 {
    if m > k {
        return 0.0;
    }
    let k = k as f64;
    (0..m).map(|i| 1.0 - i as f64 / k).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{AnalyticDistribution, Pmf};

    #[test]
    fn sandwich_examples() {
        let p = Pmf::point_mass(1).unwrap();
        let s = sandwich_lower_bound(&p, 50, &[0.1, 0.5, 0.999_999]).unwrap();
        assert_close!(s.deficit, (1.0f64 + 1.0 / (0.999_999 * 50.0)).ln(), 1e-15);
        let u = Pmf::uniform(10).unwrap();
        let s = sandwich_lower_bound(&u, 100, &[0.05]).unwrap();
        assert_close!(s.deficit, 1.2f64.ln(), 1e-15);
        let s = sandwich_lower_bound(&u, 100, &default_epsilon_grid()).unwrap();
        assert!(s.deficit >= 0.0);
        assert!(sandwich_lower_bound(&u, 100, &[]).is_err());
        assert!(sandwich_lower_bound(&u, 100, &[1.0]).is_err());
    }

    #[test]
    fn plug_in_risk_examples() {
        let n = 10_000u64;
        let log_term = (n as f64).ln() / 100.0;
        let v = plug_in_risk_bound(1.0, 1.0, n, &default_epsilon_grid()).unwrap();
        assert_close!(v, log_term + 1.0 + (2.0 / n as f64).ln_1p(), 1e-15);

        let mut grid = default_epsilon_grid();
        let v = plug_in_risk_bound(1.0, 2.0, n, &grid).unwrap();
        assert_close!(v, 0.297_718_091_015_150_8, 1e-15);
        grid.push(0.01);
        assert_close!(plug_in_risk_bound(1.0, 2.0, n, &grid).unwrap(), v, 0.0);

        assert!(plug_in_risk_bound(1.0, 2.0, n, &[1.0]).is_err());
        assert!(plug_in_risk_bound(-1.0, 2.0, n, &grid).is_err());
    }

    #[test]
    fn root_n_truncation_reproduces_the_upper_envelope() {
        for (h, alpha, n) in [
            (1.0, 2.0, 100u64),
            (5.0, 3.0, 10_000),
            (0.3, 1.5, 1_000_000),
        ] {
            let eps = 1.0 / (n as f64).sqrt();
            let risk = plug_in_risk_bound(h, alpha, n, &[eps]).unwrap();
            let upper = minimax_upper(h, alpha, n).unwrap();
            let slack = 1.0 / (eps * n as f64) - (1.0 / (eps * n as f64)).ln_1p();
            assert_close!(upper - risk, slack, 1e-12);
        }
    }

    #[test]
    fn minimax_upper_examples() {
        assert_close!(
            minimax_upper(1.0, 2.0, 100).unwrap(),
            0.994_811_500_502_061,
            1e-14
        );
        let n = 1000u64;
        let near_one = minimax_upper(2.0, 1.0 + 1e-12, n).unwrap();
        assert_close!(
            near_one,
            (1.0 + (n as f64).ln()) / (n as f64).sqrt() + 2.0,
            1e-10
        );
        let mut prev = f64::INFINITY;
        for k in 0..=60 {
            let n = 10f64.powf(2.0 + k as f64 / 10.0) as u64;
            let v = minimax_upper(1.0, 2.0, n).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(minimax_upper(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn minimax_lower_examples() {
        let m = minimax_lower_value(1.0, 55).unwrap();
        assert_close!(m.bound, 1.001_833_296_308_117_7, 1e-15);
        let m = minimax_lower_value(1.0, 100).unwrap();
        assert_close!(m.h, 13.815_510_557_964_274, 1e-14);
        assert_close!(m.bound, 1.151_292_546_497_022_8, 1e-15);
        for alpha in [0.5, 1.0, 2.5, 7.0] {
            let m = minimax_lower_value(alpha, 1234).unwrap();
            let log_n = 1234f64.ln();
            assert_close!(
                m.bound * 4.0 * 3f64.powf(alpha) * log_n.powf(alpha - 1.0),
                m.h,
                1e-12 * m.h
            );
        }
    }

    #[test]
    fn no_emp_example() {
        let pair = no_emp_construction(1.5, 4).unwrap();
        assert_close!(pair.a_n, 0.875 * 0.875f64.ln(), 1e-16);
        assert_eq!(pair.s, 7989);
        assert_close!(pair.kl, (8.0f64 / 7.0).ln(), 1e-15);
        assert!(pair.entropy_gap() >= 0.75);
        assert_close!(pair.risk_floor(), 0.137_954_790_439_290_87, 1e-15);
        match &pair.mun {
            AnalyticDistribution::TwoLevel(t) => {
                assert_eq!(t.light_count(), 7989);
                assert_close!(t.heavy(), 0.875, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn no_emp_errors() {
        assert!(matches!(
            no_emp_construction(1.0, 4),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            no_emp_construction(30.0, 8),
            Err(Error::Unrepresentable { .. })
        ));
        assert!(matches!(
            no_emp_construction(1.01, 1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn birthday_examples() {
        assert_eq!(birthday_no_collision(2, 2), 0.5);
        assert_eq!(birthday_no_collision(1, 17), 1.0);
        assert_eq!(birthday_no_collision(5, 4), 0.0);
        for n in 2..=100u64 {
            assert!(birthday_no_collision(n, n * n) >= 0.5);
        }
    }
}

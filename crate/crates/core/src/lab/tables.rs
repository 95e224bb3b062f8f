use serde_json::json;

use super::{parse_f64_list, parse_u64_list, Settings};
use crate::bounds::{birthday_no_collision, minimax_lower_value, no_emp_construction};
use crate::dist::entropy;
use crate::error::{Error, Result};
use crate::moments::{max_alpha_entropy_bounds, max_alpha_entropy_exact};
use crate::numfmt::{fmt_f64, Float};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxentRow {
    pub k: u64,
    pub alpha: f64,
    pub lower: f64,
    pub exact: f64,
    pub upper: f64,
}

/// Envelope and exact maximum of `H_α` over `K` symbols, for every pair.
pub fn maxent_rows(ks: &[u64], alphas: &[f64]) -> Result<Vec<MaxentRow>> {
    let mut rows = Vec::with_capacity(ks.len() * alphas.len());
    for &k in ks {
        for &alpha in alphas {
            let env = max_alpha_entropy_bounds(k, alpha)?;
            let exact = max_alpha_entropy_exact(k, alpha)?;
            rows.push(MaxentRow {
                k,
                alpha,
                lower: env.lower,
                exact: exact.value,
                upper: env.upper,
            });
        }
    }
    Ok(rows)
}

/// CSV `K,alpha,lower,exact,upper`.
pub fn run_maxent(settings: &Settings) -> Result<String> {
    let ks = parse_u64_list("k-list", settings.raw("k-list").unwrap_or("2..64"))?;
    let alphas = parse_f64_list(
        "alpha-list",
        settings.raw("alpha-list").unwrap_or("1,1.5,2,3"),
    )?;
    if ks.is_empty() || alphas.is_empty() {
        return Err(Error::InvalidArgument {
            key: "k-list".into(),
            message: "empty K or alpha list".into(),
        });
    }
    let mut out = String::from("K,alpha,lower,exact,upper\n");
    for row in maxent_rows(&ks, &alphas)? {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.k,
            fmt_f64(row.alpha),
            fmt_f64(row.lower),
            fmt_f64(row.exact),
            fmt_f64(row.upper)
        ));
    }
    Ok(out)
}

/// Report for the `noemp` or `minimax` lower-bound construction.
pub fn lowerbound_report(settings: &Settings) -> Result<serde_json::Value> {
    let kind: String = settings.require("kind")?;
    match kind.as_str() {
        "noemp" => {
            let h = settings.require("h")?;
            let n = settings.require("n")?;
            let pair = no_emp_construction(h, n)?;
            let gap = pair.entropy_gap();
            Ok(json!({
                "kind": "noemp",
                "n": n,
                "h": Float(h),
                "a_n": Float(pair.a_n),
                "log_s": Float(pair.log_s),
                "s": pair.s,
                "kl": Float(pair.kl),
                "kl_limit": Float(1.0 / n as f64),
                "entropy_mu0": Float(entropy(&pair.mu0)),
                "entropy_mun": Float(pair.entropy_mun),
                "entropy_gap": Float(gap),
                "gap_at_least_half_h": gap >= h / 2.0,
                "risk_floor": Float(pair.risk_floor()),
            }))
        }
        "minimax" => {
            let alpha = settings.require("alpha")?;
            let n: u64 = settings.require("n")?;
            let lower = minimax_lower_value(alpha, n)?;
            let k = n.checked_mul(n).ok_or_else(|| Error::InvalidArgument {
                key: "n".into(),
                message: format!("n^2 overflows for n = {n}"),
            })?;
            Ok(json!({
                "kind": "minimax",
                "alpha": Float(alpha),
                "n": n,
                "h": Float(lower.h),
                "gap": Float(lower.gap),
                "bound": Float(lower.bound),
                "no_collision": Float(birthday_no_collision(n, k)),
            }))
        }
        other => Err(Error::InvalidArgument {
            key: "kind".into(),
            message: format!("unknown kind '{other}' (expected noemp or minimax)"),
        }),
    }
}

pub fn run_lowerbound(settings: &Settings) -> Result<String> {
    Ok(format!("{}\n", lowerbound_report(settings)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxent_first_row() {
        let mut s = Settings::new();
        s.set("k-list", "2").set("alpha-list", "1");
        let csv = run_maxent(&s).unwrap();
        let row: Vec<f64> = csv
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(row[0], 2.0);
        assert_close!(row[2], 2f64.ln(), 1e-16);
        assert_close!(row[3], 2f64.ln(), 1e-16);
        assert_close!(row[4], 1.0 + (-1f64).exp(), 1e-15);
        s.set("k-list", "1");
        assert!(run_maxent(&s).is_err());
    }

    #[test]
    fn lowerbound_reports() {
        let mut s = Settings::new();
        s.set("kind", "noemp").set("h", "1.5").set("n", "4");
        let r = lowerbound_report(&s).unwrap();
        assert_close!(r["kl"].as_f64().unwrap(), (8.0f64 / 7.0).ln(), 1e-15);
        assert!(r["entropy_gap"].as_f64().unwrap() >= 0.75);
        assert_eq!(r["s"], 7989);

        let mut s = Settings::new();
        s.set("kind", "minimax").set("alpha", "1").set("n", "100");
        let r = lowerbound_report(&s).unwrap();
        assert_close!(r["h"].as_f64().unwrap(), 3.0 * 100f64.ln(), 1e-14);
        assert_close!(r["bound"].as_f64().unwrap(), 100f64.ln() / 4.0, 1e-15);
        assert!(r["no_collision"].as_f64().unwrap() >= 0.5);

        s.set("kind", "other");
        assert!(lowerbound_report(&s).is_err());
    }
}

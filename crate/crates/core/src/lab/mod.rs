//! Experiment harness behind the `entcert` command-line tool.
//!
//! Every command reads its parameters from a [`Settings`] map (a flat
//! `key=value` configuration file overlaid with command-line flags) and returns
//! the text it would print. All randomness derives from the `seed` setting.

mod coverage;
mod estimate;
mod rates;
mod tables;

pub use coverage::{coverage, run_coverage, CoverageReport};
pub use estimate::run_estimate;
pub use rates::{rate_curves, run_rates, BoundKind, RateCurve};
pub use tables::{lowerbound_report, maxent_rows, run_lowerbound, run_maxent, MaxentRow};

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::dist::AnalyticDistribution;
use crate::error::{Error, Result};

/// Flat string-valued parameters; keys use the long flag names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('_', "-")
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key=value` lines; blank lines and `#` comments are ignored.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut settings = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected key=value, found '{line}'"),
                });
            };
            if key.trim().is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "empty key".into(),
                });
            }
            settings.set(key, value.trim());
        }
        Ok(settings)
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_config_text(&std::fs::read_to_string(path)?)
    }

    /// Sets `key`, replacing any earlier value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.values.insert(normalize_key(key), value.into());
        self
    }

    /// Later settings win.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize_key(key)).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| Error::InvalidArgument {
                    key: key.to_string(),
                    message: format!("'{v}': {e}"),
                })
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?.ok_or_else(|| Error::InvalidArgument {
            key: key.to_string(),
            message: "required but not given".into(),
        })
    }

    pub fn seed(&self) -> Result<u64> {
        self.get_or("seed", 0)
    }
}

/// Reference families used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Uniform { d: u64 },
    Mixture { d: u64, big_d: u64, p: f64 },
    Zeta { q: f64 },
}

impl Family {
    /// Reads `family` and its parameters (`d`, `big-d`, `p`, `q`), defaulting
    /// to `d = 10`, `big-d = 1000`, `p = 0.95`, `q = 2`.
    pub fn from_settings(settings: &Settings) -> Result<Self> {
        let name: String = settings.require("family")?;
        let d = settings.get_or("d", 10u64)?;
        match name.as_str() {
            "uniform" => Ok(Family::Uniform { d }),
            "mixture" => Ok(Family::Mixture {
                d,
                big_d: settings.get_or("big-d", 1000u64)?,
                p: settings.get_or("p", 0.95)?,
            }),
            "zeta" => Ok(Family::Zeta {
                q: settings.get_or("q", 2.0)?,
            }),
            other => Err(Error::InvalidArgument {
                key: "family".into(),
                message: format!("unknown family '{other}' (expected uniform, mixture or zeta)"),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Uniform { .. } => "uniform",
            Family::Mixture { .. } => "mixture",
            Family::Zeta { .. } => "zeta",
        }
    }

    pub fn distribution(&self) -> Result<AnalyticDistribution> {
        match *self {
            Family::Uniform { d } => AnalyticDistribution::uniform(d),
            Family::Mixture { d, big_d, p } => {
                AnalyticDistribution::mixture_of_uniforms(d, big_d, p)
            }
            Family::Zeta { q } => AnalyticDistribution::zeta(q),
        }
    }

    /// Support size, `None` for infinite supports.
    pub fn support(&self) -> Option<u64> {
        match *self {
            Family::Uniform { d } => Some(d),
            Family::Mixture { d, big_d, .. } => Some(d + big_d),
            Family::Zeta { .. } => None,
        }
    }

    pub fn params(&self) -> Vec<(String, String)> {
        match *self {
            Family::Uniform { d } => vec![("d".into(), d.to_string())],
            Family::Mixture { d, big_d, p } => vec![
                ("d".into(), d.to_string()),
                ("D".into(), big_d.to_string()),
                ("p".into(), p.to_string()),
            ],
            Family::Zeta { q } => vec![("q".into(), q.to_string())],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// Integer sample sizes from `start` to `stop`: equal ratios for
/// [`Spacing::Log`], equal steps for [`Spacing::Linear`]. Rounding collisions
/// are dropped, so the grid is strictly increasing.
pub fn n_grid(start: u64, stop: u64, points: usize, spacing: Spacing) -> Result<Vec<u64>> {
    if start == 0 || stop < start || points == 0 {
        return Err(Error::InvalidArgument {
            key: "n-grid".into(),
            message: format!(
                "need 1 <= start <= stop and points >= 1, got {start}:{stop}:{points}"
            ),
        });
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let (a, b) = (start as f64, stop as f64);
    let mut grid: Vec<u64> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            let x = match spacing {
                Spacing::Log => a * (b / a).powf(t),
                Spacing::Linear => a + (b - a) * t,
            };
            (x.round() as u64).clamp(start, stop)
        })
        .collect();
    grid.dedup();
    Ok(grid)
}

/// Parses `start:stop:points`, with numbers such as `1e3` accepted.
pub fn parse_n_grid(spec: &str, spacing: Spacing) -> Result<Vec<u64>> {
    let bad = |message: String| Error::InvalidArgument {
        key: "n-grid".into(),
        message,
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, points] = parts[..] else {
        return Err(bad(format!("expected start:stop:points, found '{spec}'")));
    };
    let int = |s: &str| -> Result<u64> {
        let x: f64 = s
            .trim()
            .parse()
            .map_err(|_| bad(format!("'{s}' is not a number")))?;
        if x.fract() != 0.0 || !(1.0..=9.0e15).contains(&x) {
            return Err(bad(format!("'{s}' is not a positive integer")));
        }
        Ok(x as u64)
    };
    n_grid(int(start)?, int(stop)?, int(points)? as usize, spacing)
}

/// Comma-separated list; integer items may be inclusive ranges `a..b`.
pub(crate) fn parse_u64_list(key: &str, spec: &str) -> Result<Vec<u64>> {
    let bad = |item: &str| Error::InvalidArgument {
        key: key.to_string(),
        message: format!("'{item}' is not an integer or a range a..b"),
    };
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad(item))?;
            let b: u64 = b.trim().parse().map_err(|_| bad(item))?;
            out.extend(a..=b);
        } else {
            out.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    Ok(out)
}

pub(crate) fn parse_f64_list(key: &str, spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            item.parse().map_err(|_| Error::InvalidArgument {
                key: key.to_string(),
                message: format!("'{item}' is not a number"),
            })
        })
        .collect()
}

/// Runs the named command.
pub fn run(command: &str, settings: &Settings) -> Result<String> {
    match command {
        "estimate" => run_estimate(settings),
        "rates" => run_rates(settings),
        "coverage" => run_coverage(settings),
        "maxent" => run_maxent(settings),
        "lowerbound" => run_lowerbound(settings),
        other => Err(Error::Unsupported(format!("unknown command '{other}'"))),
    }
}

/// Machine-readable error object.
pub fn error_json(err: &Error) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("error".into(), err.kind().into());
    obj.insert("message".into(), err.to_string().into());
    match err {
        Error::Parse { line, .. } => {
            obj.insert("line".into(), (*line).into());
        }
        Error::InsufficientSamples { n, min_n, .. } => {
            obj.insert("n".into(), (*n).into());
            obj.insert("min_n".into(), (*min_n).into());
        }
        Error::Unrepresentable { log_value } => {
            obj.insert(
                "log_value".into(),
                serde_json::to_value(crate::numfmt::Float(*log_value)).unwrap_or_default(),
            );
        }
        Error::InvalidArgument { key, .. } => {
            obj.insert("key".into(), key.clone().into());
        }
        _ => {}
    }
    serde_json::Value::Object(obj).to_string()
}

/// Process exit status for an error: 3 for numerical failures, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numeric() {
        3
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_and_overlay() {
        let mut s =
            Settings::from_config_text("# c\nalpha = 2\n\nn_grid=1:10:3\nseed=7\n").unwrap();
        assert_eq!(s.get::<f64>("alpha").unwrap(), Some(2.0));
        assert_eq!(s.raw("n-grid"), Some("1:10:3"));
        let mut flags = Settings::new();
        flags.set("--alpha", "3");
        s.overlay(&flags);
        assert_eq!(s.require::<f64>("alpha").unwrap(), 3.0);
        assert_eq!(s.seed().unwrap(), 7);
        assert!(matches!(
            Settings::from_config_text("a=1\noops\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(s.get::<u64>("alpha").is_ok());
        s.set("alpha", "x");
        assert!(matches!(
            s.get::<f64>("alpha"),
            Err(Error::InvalidArgument { .. })
        ));
        assert!(s.require::<f64>("missing").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(
            n_grid(100, 100_000, 4, Spacing::Log).unwrap(),
            vec![100, 1000, 10_000, 100_000]
        );
        assert_eq!(
            n_grid(10, 50, 5, Spacing::Linear).unwrap(),
            vec![10, 20, 30, 40, 50]
        );
        assert_eq!(n_grid(5, 500, 1, Spacing::Log).unwrap(), vec![5]);
        assert_eq!(n_grid(1, 3, 10, Spacing::Log).unwrap(), vec![1, 2, 3]);
        assert_eq!(
            parse_n_grid("1e3:1e6:4", Spacing::Log).unwrap(),
            vec![1000, 10_000, 100_000, 1_000_000]
        );
        assert!(parse_n_grid("10:1:3", Spacing::Log).is_err());
        assert!(parse_n_grid("10:100", Spacing::Log).is_err());
        assert!(parse_n_grid("0.5:100:3", Spacing::Log).is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_u64_list("k", "2..4, 9").unwrap(), vec![2, 3, 4, 9]);
        assert!(parse_u64_list("k", "2..x").is_err());
        assert_eq!(
            parse_f64_list("a", "1,1.5, 2").unwrap(),
            vec![1.0, 1.5, 2.0]
        );
    }

    #[test]
    fn families() {
        let mut s = Settings::new();
        s.set("family", "mixture");
        let f = Family::from_settings(&s).unwrap();
        assert_eq!(
            f,
            Family::Mixture {
                d: 10,
                big_d: 1000,
                p: 0.95
            }
        );
        assert_eq!(f.support(), Some(1010));
        s.set("family", "gamma");
        assert!(Family::from_settings(&s).is_err());
    }

    #[test]
    fn error_objects() {
        let e = Error::Parse {
            line: 3,
            message: "bad".into(),
        };
        let v: serde_json::Value = serde_json::from_str(&error_json(&e)).unwrap();
        assert_eq!(v["error"], "parse");
        assert_eq!(v["line"], 3);
        assert_eq!(exit_code(&e), 2);
        assert_eq!(exit_code(&Error::NonFinite("x".into())), 3);
    }
}

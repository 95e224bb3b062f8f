use std::str::FromStr;

use super::{parse_n_grid, Family, Settings, Spacing};
use crate::bounds::{ct_rate_bound, our_rate_bound, wy_bound, DEFAULT_WY_C};
use crate::error::{Error, Result};
use crate::numfmt::fmt_f64;

const DEFAULT_N_GRID: &str = "100:10000000:26";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Our,
    Wy,
    Ct,
}

impl BoundKind {
    pub fn label(&self) -> &'static str {
        match self {
            BoundKind::Our => "OUR",
            BoundKind::Wy => "WY",
            BoundKind::Ct => "CT",
        }
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "our" => Ok(BoundKind::Our),
            "wy" => Ok(BoundKind::Wy),
            "ct" => Ok(BoundKind::Ct),
            other => Err(Error::InvalidArgument {
                key: "bounds".into(),
                message: format!("unknown bound '{other}' (expected our, wy or ct)"),
            }),
        }
    }
}

/// One bound evaluated along a grid of sample sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub family: String,
    pub bound: BoundKind,
    pub points: Vec<(u64, f64)>,
    pub params: Vec<(String, String)>,
}

impl RateCurve {
    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn point(family: &Family, bound: BoundKind, n: u64, wy_c: f64) -> Result<f64> {
    let dist = family.distribution()?;
    match (bound, *family) {
        (BoundKind::Our, _) => Ok(our_rate_bound(&dist, family.support(), n)?.value),
        (BoundKind::Wy, Family::Mixture { d, big_d, .. }) => wy_bound(d, big_d, n, wy_c),
        (BoundKind::Ct, Family::Mixture { d, big_d, .. }) => ct_rate_bound(&dist, d + big_d, n),
        (bound, family) => Err(Error::Unsupported(format!(
            "bound {} for the {} family",
            bound.label(),
            family.name()
        ))),
    }
}

/// Evaluates each bound on `grid`. The mixture family supports all three
/// bounds; other families support `OUR` only.
pub fn rate_curves(
    family: &Family,
    bounds: &[BoundKind],
    grid: &[u64],
    wy_c: f64,
    extra_params: &[(String, String)],
) -> Result<Vec<RateCurve>> {
    let mut params = family.params();
    params.push(("C".into(), wy_c.to_string()));
    params.push(("alpha_range".into(), "(1,64]".into()));
    params.extend(extra_params.iter().cloned());
    bounds
        .iter()
        .map(|&bound| {
            let points = grid
                .iter()
                .map(|&n| Ok((n, point(family, bound, n, wy_c)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(RateCurve {
                family: family.name().into(),
                bound,
                points,
                params: params.clone(),
            })
        })
        .collect()
}

/// CSV `family,bound,n,value,params`, one row per bound and sample size.
pub fn run_rates(settings: &Settings) -> Result<String> {
    let family = Family::from_settings(settings)?;
    if matches!(family, Family::Uniform { .. }) {
        return Err(Error::Unsupported(
            "rate curves are available for the mixture and zeta families".into(),
        ));
    }
    let default_bounds = if matches!(family, Family::Zeta { .. }) {
        "our"
    } else {
        "our,wy,ct"
    };
    let bounds = settings
        .raw("bounds")
        .unwrap_or(default_bounds)
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<BoundKind>>>()?;
    let spacing = if settings.get_or("linear", false)? {
        Spacing::Linear
    } else {
        Spacing::Log
    };
    let grid_spec = settings.raw("n-grid").unwrap_or(DEFAULT_N_GRID);
    let grid = parse_n_grid(grid_spec, spacing)?;
    let wy_c = settings.get_or("wy-c", DEFAULT_WY_C)?;
    let extra = [
        (
            "n_grid".to_string(),
            format!(
                "{grid_spec}:{}",
                if spacing == Spacing::Log {
                    "log"
                } else {
                    "linear"
                }
            ),
        ),
        ("seed".to_string(), settings.seed()?.to_string()),
    ];
    let curves = rate_curves(&family, &bounds, &grid, wy_c, &extra)?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    writer
        .write_record(["family", "bound", "n", "value", "params"])
        .map_err(io)?;
    for curve in &curves {
        let params = curve.params_string();
        for &(n, value) in &curve.points {
            writer
                .write_record([
                    curve.family.as_str(),
                    curve.bound.label(),
                    &n.to_string(),
                    &fmt_f64(value),
                    &params,
                ])
                .map_err(io)?;
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

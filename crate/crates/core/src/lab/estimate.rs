use super::{parse_f64_list, Settings};
use crate::certify::{certificate, certificate_best_alpha, ingest, Format};
use crate::error::{Error, Result};
use crate::moments::max_alpha_entropy_bounds;
use crate::numfmt::Float;

/// `alpha=h` pairs separated by commas, e.g. `2=5.5,3=20`.
fn parse_h_table(spec: &str) -> Result<Vec<(f64, f64)>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let bad = || Error::InvalidArgument {
                key: "h-table".into(),
                message: format!("expected alpha=h, found '{item}'"),
            };
            let (a, h) = item.split_once('=').ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                h.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

enum MomentSource {
    Fixed(f64),
    Table(Vec<(f64, f64)>),
    Support(u64),
}

impl MomentSource {
    fn h(&self, alpha: f64) -> Result<f64> {
        match self {
            MomentSource::Fixed(h) => Ok(*h),
            MomentSource::Table(rows) => rows
                .iter()
                .find(|(a, _)| *a == alpha)
                .map(|(_, h)| *h)
                .ok_or_else(|| Error::InvalidArgument {
                    key: "h-table".into(),
                    message: format!("no entry for alpha = {alpha}"),
                }),
            MomentSource::Support(k) => Ok(max_alpha_entropy_bounds(*k, alpha)?.upper),
        }
    }
}

/// Certificate JSON for the sample or count file named by `input`.
///
/// The moment bound comes from `h`, from an `h-table` of `alpha=h` pairs, or
/// from `h-from-support K`, the largest `H_α` any distribution on `K` symbols
/// can have. With `alpha-grid` the order giving the smallest radius is chosen.
pub fn run_estimate(settings: &Settings) -> Result<String> {
    let path: String = settings.require("input")?;
    let format: Format = settings.get_or("format", Format::Samples)?;
    let delta = settings.get_or("delta", 0.05)?;

    let sources = [
        settings.get::<f64>("h")?.map(MomentSource::Fixed),
        settings
            .raw("h-table")
            .map(parse_h_table)
            .transpose()?
            .map(MomentSource::Table),
        settings
            .get::<u64>("h-from-support")?
            .map(MomentSource::Support),
    ];
    let mut given = sources.into_iter().flatten();
    let source = given.next().ok_or_else(|| Error::InvalidArgument {
        key: "h".into(),
        message: "one of h, h-table or h-from-support is required".into(),
    })?;
    if given.next().is_some() {
        return Err(Error::InvalidArgument {
            key: "h".into(),
            message: "give only one of h, h-table or h-from-support".into(),
        });
    }

    let emp = ingest(&path, format)?;
    let json = match settings.raw("alpha-grid") {
        Some(grid) => {
            let grid = parse_f64_list("alpha-grid", grid)?;
            let selection = certificate_best_alpha(&emp, |a| source.h(a), delta, &grid)?;
            let mut value = selection.certificate.to_json_value();
            let candidates: Vec<[Float; 3]> = selection
                .candidates
                .iter()
                .map(|&(a, h, r)| [Float(a), Float(h), Float(r)])
                .collect();
            value["candidates"] = serde_json::to_value(candidates).expect("floats serialize");
            value
        }
        None => {
            let alpha = settings.require("alpha")?;
            certificate(&emp, alpha, source.h(alpha)?, delta)?.to_json_value()
        }
    };
    Ok(format!("{json}\n"))
}

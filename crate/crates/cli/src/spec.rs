//! Aperture and mask specification strings.
//!
//! Apertures: `gaussian:sigma=500um`, `slit:w=450um`, `open`, `open:w=20mm`,
//! `sampled:file=<path>` (two-column CSV of `x_meters,amplitude`).
//! Masks: `slitmask:center=532nm,w=300um`, `gaussmask:center=532nm,sigma=500um`,
//! `blocker:center=532nm,w=300um`.

use crate::error::{CliError, CliResult};
use crate::units::parse_length;
use spectro_core::filtering::RainbowMask;
use spectro_core::{ApertureProfile, Grid1D};
use std::collections::BTreeMap;
use std::path::Path;

fn parse_params(kind: &str, body: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            CliError::config(format!("expected key=value in '{kind}' spec, got '{item}'"))
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn take(params: &mut BTreeMap<String, String>, kind: &str, key: &str) -> CliResult<String> {
    params
        .remove(key)
        .ok_or_else(|| CliError::config(format!("'{kind}' spec needs {key}=<value>")))
}

fn reject_leftovers(params: BTreeMap<String, String>, kind: &str) -> CliResult<()> {
    if let Some(k) = params.keys().next() {
        return Err(CliError::config(format!(
            "unknown parameter '{k}' in '{kind}' spec"
        )));
    }
    Ok(())
}

pub fn parse_aperture(spec: &str) -> CliResult<ApertureProfile> {
    let (kind, body) = match spec.split_once(':') {
        Some((k, b)) => (k.trim(), b),
        None => (spec.trim(), ""),
    };
    match kind {
        "gaussian" => {
            let mut p = parse_params(kind, body)?;
            let sigma = parse_length(&take(&mut p, kind, "sigma")?)?;
            reject_leftovers(p, kind)?;
            Ok(ApertureProfile::gaussian(sigma)?)
        }
        "slit" => {
            let mut p = parse_params(kind, body)?;
            let width = parse_length(&take(&mut p, kind, "w")?)?;
            reject_leftovers(p, kind)?;
            Ok(ApertureProfile::slit(width)?)
        }
        "open" => {
            let mut p = parse_params(kind, body)?;
            let aperture = match p.remove("w") {
                Some(w) => ApertureProfile::open_with_width(parse_length(&w)?)?,
                None => ApertureProfile::open(),
            };
            reject_leftovers(p, kind)?;
            Ok(aperture)
        }
        "sampled" => {
            let mut p = parse_params(kind, body)?;
            let file = take(&mut p, kind, "file")?;
            reject_leftovers(p, kind)?;
            load_sampled_aperture(Path::new(&file))
        }
        other => Err(CliError::config(format!(
            "unknown aperture kind '{other}' (gaussian, slit, open, sampled)"
        ))),
    }
}

/// Two-column CSV `x_meters,amplitude`; `#` comment lines allowed; the x
/// column must be uniformly spaced and ascending.
pub fn load_sampled_aperture(path: &Path) -> CliResult<ApertureProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read '{}': {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut amps = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let bad = || {
            CliError::config(format!(
                "'{}' line {}: expected 'x_meters,amplitude'",
                path.display(),
                lineno + 1
            ))
        };
        let x: f64 = cols.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let a: f64 = cols.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if cols.next().is_some() {
            return Err(bad());
        }
        xs.push(x);
        amps.push(a);
    }
    if xs.len() < 2 {
        return Err(CliError::config(format!(
            "'{}': need at least two samples",
            path.display()
        )));
    }
    let step = xs[1] - xs[0];
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::config(format!(
            "'{}': x column must be strictly ascending",
            path.display()
        )));
    }
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-6 * step {
            return Err(CliError::config(format!(
                "'{}': x column must be uniformly spaced",
                path.display()
            )));
        }
    }
    let grid = Grid1D::new(xs[0], step, xs.len()).map_err(CliError::from)?;
    Ok(ApertureProfile::sampled(grid, amps)?)
}

pub fn parse_mask(spec: &str) -> CliResult<RainbowMask> {
    let (kind, body) = match spec.split_once(':') {
        Some((k, b)) => (k.trim(), b),
        None => (spec.trim(), ""),
    };
    match kind {
        "slitmask" => {
            let mut p = parse_params(kind, body)?;
            let center = parse_length(&take(&mut p, kind, "center")?)?;
            let width = parse_length(&take(&mut p, kind, "w")?)?;
            reject_leftovers(p, kind)?;
            Ok(RainbowMask::slit(center, width)?)
        }
        "gaussmask" => {
            let mut p = parse_params(kind, body)?;
            let center = parse_length(&take(&mut p, kind, "center")?)?;
            let sigma = parse_length(&take(&mut p, kind, "sigma")?)?;
            reject_leftovers(p, kind)?;
            Ok(RainbowMask::gaussian(center, sigma)?)
        }
        "blocker" => {
            let mut p = parse_params(kind, body)?;
            let center = parse_length(&take(&mut p, kind, "center")?)?;
            let width = parse_length(&take(&mut p, kind, "w")?)?;
            reject_leftovers(p, kind)?;
            Ok(RainbowMask::blocker(center, width)?)
        }
        other => Err(CliError::config(format!(
            "unknown mask kind '{other}' (slitmask, gaussmask, blocker)"
        ))),
    }
}

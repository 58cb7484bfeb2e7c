//! Unit-suffixed number parsing. Bare numbers are rejected for any physical
//! quantity — the classic failure mode in this domain is a silent nm/µm mixup.

use crate::error::CliError;

/// Parses a length with an explicit suffix (`nm`, `um`, `µm`, `mm`, `m`)
/// into meters. Sign is preserved; validation is the caller's business.
pub fn parse_length(token: &str) -> Result<f64, CliError> {
    let t = token.trim();
    let (number, factor) = if let Some(v) = t.strip_suffix("nm") {
        (v, 1e-9)
    } else if let Some(v) = t.strip_suffix("um") {
        (v, 1e-6)
    } else if let Some(v) = t.strip_suffix("µm") {
        (v, 1e-6)
    } else if let Some(v) = t.strip_suffix("mm") {
        (v, 1e-3)
    } else if let Some(v) = t.strip_suffix('m') {
        (v, 1.0)
    } else {
        return Err(CliError::config(format!(
            "missing length unit in '{t}' (use nm, um, mm or m)"
        )));
    };
    let value: f64 = number.trim().parse().map_err(|_| {
        CliError::config(format!("cannot parse length '{t}': bad number '{number}'"))
    })?;
    if !value.is_finite() {
        return Err(CliError::config(format!("length '{t}' is not finite")));
    }
    Ok(value * factor)
}

/// Parses a groove density with an explicit `/mm` or `/m` suffix into lines
/// per meter.
pub fn parse_groove_density(token: &str) -> Result<f64, CliError> {
    let t = token.trim();
    let (number, factor) = if let Some(v) = t.strip_suffix("/mm") {
        (v, 1e3)
    } else if let Some(v) = t.strip_suffix("/m") {
        (v, 1.0)
    } else {
        return Err(CliError::config(format!(
            "missing groove-density unit in '{t}' (use /mm or /m)"
        )));
    };
    let value: f64 = number.trim().parse().map_err(|_| {
        CliError::config(format!(
            "cannot parse groove density '{t}': bad number '{number}'"
        ))
    })?;
    if !value.is_finite() || value <= 0.0 {
        return Err(CliError::config(format!(
            "groove density '{t}' must be positive"
        )));
    }
    Ok(value * factor)
}

/// Comma-separated list of suffixed lengths.
pub fn parse_length_list(token: &str) -> Result<Vec<f64>, CliError> {
    let items: Vec<&str> = token
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(CliError::config(format!("empty length list '{token}'")));
    }
    items.into_iter().map(parse_length).collect()
}

pub fn format_nm(meters: f64) -> String {
    format!("{:.4} nm", meters / 1e-9)
}

pub fn format_um(meters: f64) -> String {
    format!("{:.4} µm", meters / 1e-6)
}

/// Area formatted in the bench's customary nm·µm.
pub fn format_nm_um(square_meters: f64) -> String {
    format!("{:.4} nm·µm", square_meters / 1e-15)
}

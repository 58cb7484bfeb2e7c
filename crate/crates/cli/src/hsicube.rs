//! HSICUBE v1 text format.
//!
//! ```text
//! HSICUBE v1 <width> <height> <nlambda>
//! <λ0> <λ1> ... (ascending, meters)
//! <nlambda rasters of width×height space-separated reals, row-major>
//! ```
//!
//! The reader treats everything after the wavelength line as one whitespace
//! token stream, so raster line breaks are free-form.

use crate::error::{CliError, CliResult};
use spectro_core::filtering::HyperspectralCube;
use std::fmt::Write as _;
use std::path::Path;

pub fn read_cube(path: &Path) -> CliResult<HyperspectralCube> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read cube '{}': {e}", path.display())))?;
    parse_cube(&text).map_err(|msg| CliError::config(format!("'{}': {msg}", path.display())))
}

fn parse_cube(text: &str) -> Result<HyperspectralCube, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "HSICUBE" || tokens[1] != "v1" {
        return Err("header must be 'HSICUBE v1 <width> <height> <nlambda>'".into());
    }
    let width: usize = tokens[2].parse().map_err(|_| "bad width")?;
    let height: usize = tokens[3].parse().map_err(|_| "bad height")?;
    let nlambda: usize = tokens[4].parse().map_err(|_| "bad nlambda")?;

    let lambda_line = lines.next().ok_or("missing wavelength line")?;
    let wavelengths: Vec<f64> = lambda_line
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| format!("bad wavelength '{t}'"))
        })
        .collect::<Result<_, _>>()?;
    if wavelengths.len() != nlambda {
        return Err(format!(
            "expected {nlambda} wavelengths, found {}",
            wavelengths.len()
        ));
    }

    let expected = width * height * nlambda;
    let mut data = Vec::with_capacity(expected);
    for line in lines {
        for t in line.split_whitespace() {
            data.push(t.parse::<f64>().map_err(|_| format!("bad value '{t}'"))?);
        }
    }
    if data.len() != expected {
        return Err(format!("expected {expected} values, found {}", data.len()));
    }
    HyperspectralCube::new(width, height, wavelengths, data).map_err(|e| e.to_string())
}

pub fn format_cube(cube: &HyperspectralCube) -> String {
    let mut out = format!(
        "HSICUBE v1 {} {} {}\n",
        cube.width(),
        cube.height(),
        cube.wavelengths().len()
    );
    let lambdas: Vec<String> = cube.wavelengths().iter().map(|l| format!("{l}")).collect();
    out.push_str(&lambdas.join(" "));
    out.push('\n');
    for l in 0..cube.wavelengths().len() {
        let plane = cube.plane(l);
        for y in 0..cube.height() {
            let row = &plane[y * cube.width()..(y + 1) * cube.width()];
            let mut line = String::new();
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                let _ = write!(line, "{v}");
            }
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

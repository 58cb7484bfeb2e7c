//! Shared run configuration: defaults < config file < command-line flags.
//! The resolved values are canonicalized and hashed for CSV provenance.

use crate::error::{CliError, CliResult};
use crate::units::{parse_groove_density, parse_length};
use sha2::{Digest, Sha256};
use spectro_core::OpticalSystem;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const DEFAULT_F: &str = "75mm";
pub const DEFAULT_GROOVES: &str = "300/mm";
pub const DEFAULT_LAMBDA_MIN: &str = "400nm";
pub const DEFAULT_LAMBDA_MAX: &str = "700nm";
pub const DEFAULT_WINDOW: &str = "1mm";
pub const DEFAULT_OUT: &str = "spectro-out";
pub const DEFAULT_FORMATS: &str = "csv,svg";

/// Raw common flags as they arrive from clap (all optional; a config file
/// fills the gaps, then the defaults above).
#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Flat key=value config file; command-line flags take precedence.
    /// Keys: f, grooves, lambda_min, lambda_max, window, out, formats.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Focal length of the relay lenses, e.g. 75mm
    #[arg(long, global = true)]
    pub f: Option<String>,
    /// Grating groove density, e.g. 300/mm
    #[arg(long, global = true)]
    pub grooves: Option<String>,
    /// Lower edge of the usable band, e.g. 400nm
    #[arg(long, global = true)]
    pub lambda_min: Option<String>,
    /// Upper edge of the usable band, e.g. 700nm
    #[arg(long, global = true)]
    pub lambda_max: Option<String>,
    /// Sensor half-width for spatial moments, e.g. 1mm
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output formats, comma separated: csv,svg
    #[arg(long, global = true)]
    pub formats: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub svg: bool,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: OpticalSystem,
    pub sensor_half_width: f64,
    pub out_dir: PathBuf,
    pub formats: Formats,
    /// Canonical key=value pairs of everything resolved so far; subcommands
    /// append their own parameters before hashing.
    canonical: BTreeMap<String, String>,
}

fn parse_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config '{}': {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!(
                "config '{}' line {}: expected key=value",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    const KNOWN: [&str; 7] = [
        "f",
        "grooves",
        "lambda_min",
        "lambda_max",
        "window",
        "out",
        "formats",
    ];
    for k in map.keys() {
        if !KNOWN.contains(&k.as_str()) {
            return Err(CliError::config(format!(
                "config '{}': unknown key '{k}'",
                path.display()
            )));
        }
    }
    Ok(map)
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        let pick = |flag: &Option<String>, key: &str, default: &str| -> String {
            flag.clone()
                .or_else(|| file.get(key).cloned())
                .unwrap_or_else(|| default.to_string())
        };

        let f = parse_length(&pick(&args.f, "f", DEFAULT_F))?;
        let grooves = parse_groove_density(&pick(&args.grooves, "grooves", DEFAULT_GROOVES))?;
        let lambda_min = parse_length(&pick(&args.lambda_min, "lambda_min", DEFAULT_LAMBDA_MIN))?;
        let lambda_max = parse_length(&pick(&args.lambda_max, "lambda_max", DEFAULT_LAMBDA_MAX))?;
        let window = parse_length(&pick(&args.window, "window", DEFAULT_WINDOW))?;
        if !window.is_finite() || window <= 0.0 {
            return Err(CliError::config("window must be positive"));
        }
        let system = OpticalSystem::new(f, grooves, lambda_min, lambda_max)?;

        let out_dir = args
            .out
            .clone()
            .or_else(|| file.get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));

        let formats_raw = pick(&args.formats, "formats", DEFAULT_FORMATS);
        let mut formats = Formats {
            csv: false,
            svg: false,
        };
        for item in formats_raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
        {
            match item {
                "csv" => formats.csv = true,
                "svg" => formats.svg = true,
                other => {
                    return Err(CliError::config(format!(
                        "unknown output format '{other}' (csv, svg)"
                    )))
                }
            }
        }
        if !formats.csv && !formats.svg {
            return Err(CliError::config("at least one output format is required"));
        }

        let mut canonical = BTreeMap::new();
        canonical.insert("f".into(), format!("{f}"));
        canonical.insert("grooves".into(), format!("{grooves}"));
        canonical.insert("lambda_min".into(), format!("{lambda_min}"));
        canonical.insert("lambda_max".into(), format!("{lambda_max}"));
        canonical.insert("window".into(), format!("{window}"));
        canonical.insert(
            "formats".into(),
            format!(
                "{}{}",
                if formats.csv { "csv" } else { "" },
                if formats.svg { "+svg" } else { "" }
            ),
        );

        Ok(RunConfig {
            system,
            sensor_half_width: window,
            out_dir,
            formats,
            canonical,
        })
    }

    /// Records a subcommand parameter for the provenance hash.
    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.canonical.insert(key.to_string(), value.to_string());
    }

    /// Short hash of the canonicalized configuration (command name included).
    pub fn provenance_hash(&self, command: &str) -> String {
        let mut text = format!("command={command}\n");
        for (k, v) in &self.canonical {
            text.push_str(&format!("{k}={v}\n"));
        }
        let digest = Sha256::digest(text.as_bytes());
        digest[..6].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The `# spectro-bench <command> <hash>` line every CSV starts with.
    pub fn provenance_line(&self, command: &str) -> String {
        format!(
            "# spectro-bench {command} {}\n",
            self.provenance_hash(command)
        )
    }
}

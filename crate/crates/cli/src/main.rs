//! spectro-bench: blur kernels, uncertainty sweeps, propagation runs,
//! rainbow-plane filtering demos and figure generation for a 4f
//! spectrally-programmable camera model.
//!
//! Exit codes: 0 success, 2 configuration/validation error, 3
//! numerical-contract failure. Errors print one machine-parseable line
//! `error: <code>: <message>` on stderr.

mod commands;
mod config;
mod error;
mod hsicube;
mod output;
mod spec;
mod units;

use clap::{Parser, Subcommand};
use commands::GenCubeParams;
use config::{CommonArgs, RunConfig};
use error::{CliError, CliResult};
use spectro_core::blur::ApertureFamily;
use spectro_core::filtering::MaskShape;
use spectro_core::propagation::DEFAULT_GRID_SIZE;
use std::path::PathBuf;
use units::{parse_length, parse_length_list};

#[derive(Parser)]
#[command(
    name = "spectro-bench",
    version,
    about = "Space-spectrum resolution bench for a 4f spectrally-programmable camera",
    after_help = "Physical quantities need explicit unit suffixes (nm, um, mm, m; /mm, /m).\n\
                  The optional --config file is flat key=value with the common keys\n\
                  (f, grooves, lambda_min, lambda_max, window, out, formats); command-line\n\
                  flags override it."
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Blur kernels, x–λ map and uncertainty summary for one or more apertures
    Blur {
        /// Aperture spec, repeatable: gaussian:sigma=500um | slit:w=450um |
        /// open | open:w=20mm | sampled:file=PATH
        #[arg(long, required = true)]
        aperture: Vec<String>,
        /// Evaluation wavelength, e.g. 500nm
        #[arg(long)]
        lambda: Option<String>,
        /// Half-width override for the spectral-offset grid, e.g. 100nm
        /// (default: sized from the aperture; too small fails the 99.99%
        /// mass-capture contract with exit code 3)
        #[arg(long)]
        spectral_span: Option<String>,
    },
    /// Width sweep of σ_λ, σ_x and the bandwidth product, with reciprocal fit
    Sweep {
        /// Aperture family: gaussian | slit
        #[arg(long)]
        family: String,
        /// Ascending widths, e.g. 250um,500um,1000um
        #[arg(long)]
        widths: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Plane-by-plane propagation with an oracle-vs-analytic agreement report
    Propagate {
        #[arg(long)]
        aperture: String,
        /// Source wavelengths, e.g. 450nm,550nm,650nm
        #[arg(long)]
        lambda: Option<String>,
        /// Source position on P1
        #[arg(long)]
        x0: Option<String>,
        /// Transform size (even); larger grids resolve hard pupil edges better
        #[arg(long, default_value_t = 4 * DEFAULT_GRID_SIZE)]
        grid_size: usize,
    },
    /// Filtered-PSF spread against the mask's wavelength offset
    FilterPsf {
        #[arg(long)]
        aperture: String,
        /// Mask family: slit | gaussian
        #[arg(long)]
        mask_shape: String,
        /// Mask width (slit) or σ (gaussian), e.g. 600um
        #[arg(long)]
        mask_size: String,
        /// Wavelength offsets, e.g. 0nm,4nm,8nm,12nm
        #[arg(long)]
        offsets: String,
        /// Source wavelength
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Spectrally filter an HSICUBE scene through the pupil + rainbow mask
    Scene {
        /// HSICUBE v1 file
        #[arg(long)]
        cube: PathBuf,
        #[arg(long)]
        aperture: String,
        /// Rainbow-plane mask: slitmask:center=532nm,w=300um |
        /// gaussmask:center=...,sigma=... | blocker:center=...,w=...
        #[arg(long)]
        mask: Option<String>,
        /// Physical pitch of one cube pixel, e.g. 4um
        #[arg(long)]
        pixel_pitch: Option<String>,
        /// Use one PSF at the central wavelength instead of per-λ PSFs
        #[arg(long)]
        central_lambda_approx: bool,
        /// Sample the mask at λfν0 without pupil smearing (comparison mode)
        #[arg(long)]
        ideal_filter: bool,
    },
    /// Contrast-threshold resolution sweep (MTF)
    Mtf {
        #[arg(long)]
        family: String,
        #[arg(long)]
        widths: String,
        #[arg(long)]
        lambda: Option<String>,
        /// Contrast threshold in (0,1)
        #[arg(long, default_value_t = 0.30)]
        threshold: f64,
    },
    /// Generate synthetic HSICUBE scenes
    GenCube {
        /// two-laser | bars
        #[arg(long)]
        kind: String,
        /// Output HSICUBE path
        #[arg(long)]
        out_file: PathBuf,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 8)]
        height: usize,
        /// Full stripe period in pixels (bars)
        #[arg(long, default_value_t = 16)]
        period: usize,
        /// First laser line (two-laser)
        #[arg(long)]
        lambda_a: Option<String>,
        /// Second laser line (two-laser)
        #[arg(long)]
        lambda_b: Option<String>,
        /// Wavelength list (bars), e.g. 450nm,500nm,550nm
        #[arg(long)]
        lambdas: Option<String>,
    },
}

fn parse_family(name: &str) -> CliResult<ApertureFamily> {
    match name {
        "gaussian" => Ok(ApertureFamily::Gaussian),
        "slit" => Ok(ApertureFamily::Slit),
        other => Err(CliError::config(format!(
            "unknown aperture family '{other}' (gaussian, slit)"
        ))),
    }
}

fn lambda_or_default(flag: &Option<String>, default: &str) -> CliResult<f64> {
    let lambda = parse_length(flag.as_deref().unwrap_or(default))?;
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(CliError::config("lambda must be positive"));
    }
    Ok(lambda)
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = RunConfig::resolve(&cli.common)?;
    match cli.command {
        Command::Blur {
            aperture,
            lambda,
            spectral_span,
        } => {
            let lambda = lambda_or_default(&lambda, "500nm")?;
            let span = spectral_span.as_deref().map(parse_length).transpose()?;
            commands::cmd_blur(cfg, &aperture, lambda, span)
        }
        Command::Sweep {
            family,
            widths,
            lambda,
        } => {
            let family = parse_family(&family)?;
            let widths = parse_length_list(&widths)?;
            let lambda = lambda_or_default(&lambda, "500nm")?;
            commands::cmd_sweep(cfg, family, &widths, lambda)
        }
        Command::Propagate {
            aperture,
            lambda,
            x0,
            grid_size,
        } => {
            let lambdas = match &lambda {
                Some(list) => parse_length_list(list)?,
                None => vec![500e-9],
            };
            let x0 = match &x0 {
                Some(t) => parse_length(t)?,
                None => 0.0,
            };
            commands::cmd_propagate(cfg, &aperture, &lambdas, x0, grid_size)
        }
        Command::FilterPsf {
            aperture,
            mask_shape,
            mask_size,
            offsets,
            lambda,
        } => {
            let size = parse_length(&mask_size)?;
            let shape = match mask_shape.as_str() {
                "slit" => MaskShape::Slit { width: size },
                "gaussian" => MaskShape::Gaussian { sigma: size },
                other => {
                    return Err(CliError::config(format!(
                        "unknown mask shape '{other}' (slit, gaussian)"
                    )))
                }
            };
            let offsets = parse_length_list(&offsets)?;
            let lambda = lambda_or_default(&lambda, "520nm")?;
            commands::cmd_filter_psf(cfg, &aperture, shape, &offsets, lambda)
        }
        Command::Scene {
            cube,
            aperture,
            mask,
            pixel_pitch,
            central_lambda_approx,
            ideal_filter,
        } => {
            let pitch = match &pixel_pitch {
                Some(t) => parse_length(t)?,
                None => 4e-6,
            };
            commands::cmd_scene(
                cfg,
                &cube,
                &aperture,
                mask.as_deref(),
                pitch,
                central_lambda_approx,
                ideal_filter,
            )
        }
        Command::Mtf {
            family,
            widths,
            lambda,
            threshold,
        } => {
            let family = parse_family(&family)?;
            let widths = parse_length_list(&widths)?;
            let lambda = lambda_or_default(&lambda, "500nm")?;
            commands::cmd_mtf(cfg, family, &widths, lambda, threshold)
        }
        Command::GenCube {
            kind,
            out_file,
            width,
            height,
            period,
            lambda_a,
            lambda_b,
            lambdas,
        } => {
            let lambda_a = lambda_or_default(&lambda_a, "520nm")?;
            let lambda_b = lambda_or_default(&lambda_b, "532nm")?;
            let lambdas = lambdas.as_deref().map(parse_length_list).transpose()?;
            commands::cmd_gen_cube(&GenCubeParams {
                kind,
                out_file,
                width,
                height,
                period,
                lambda_a,
                lambda_b,
                lambdas,
            })
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}: {}", e.code, e.message);
        std::process::exit(e.code);
    }
}

//! The seven subcommands. Every CSV starts with the provenance comment line;
//! all files go through the atomic writer.

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{pgm16, svg_heatmap, svg_line_plot, write_atomic, Series};
use crate::units::{format_nm, format_nm_um, format_um};
use crate::{hsicube, spec};
use spectro_core::blur::{
    blur_pair, fit_reciprocal_line, sweep_to_csv, tradeoff_sweep, uncertainty_product,
    ApertureFamily, KernelGrids,
};
use spectro_core::filtering::{
    effective_spectral_filter, filter_scene, ideal_spectral_filter, psf_sweep_to_csv,
    psf_vs_offset_sweep, two_laser_cube, Image2D, MaskShape, PsfMode, RainbowMask, SceneOptions,
    SpectralFilter,
};
use spectro_core::grid::Grid1D;
use spectro_core::metrics::{mtf_sweep_to_csv, mtf_tradeoff_sweep};
use spectro_core::propagation::{
    measure, peak_normalized_linf_error, propagate_planes, Plane, PointSource, PropagationGrids,
    SpectralLine,
};
use spectro_core::{ApertureProfile, SampledKernel};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

fn kernel_csv(provenance: &str, axis_name: &str, kernel: &SampledKernel) -> String {
    let mut out = String::from(provenance);
    let _ = writeln!(out, "{axis_name},value");
    for (i, v) in kernel.values().iter().enumerate() {
        let _ = writeln!(out, "{:e},{:e}", kernel.grid().coordinate(i), v);
    }
    out
}

fn decimate_indices(n: usize, target: usize) -> Vec<usize> {
    let stride = n.div_ceil(target).max(1);
    let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
    if *idx.last().unwrap() != n - 1 {
        idx.push(n - 1);
    }
    idx
}

/// `blur`: kernels, an x–λ intensity map and an uncertainty summary per
/// aperture spec.
pub fn cmd_blur(
    mut cfg: RunConfig,
    aperture_specs: &[String],
    lambda: f64,
    spectral_span: Option<f64>,
) -> CliResult<()> {
    cfg.note("lambda", format!("{lambda:e}"));
    if let Some(span) = spectral_span {
        cfg.note("spectral_span", format!("{span:e}"));
    }
    for (i, s) in aperture_specs.iter().enumerate() {
        cfg.note(&format!("aperture_{i}"), s);
    }
    let provenance = cfg.provenance_line("blur");
    let sys = &cfg.system;

    for (i, spec_str) in aperture_specs.iter().enumerate() {
        let aperture = spec::parse_aperture(spec_str)?;
        let mut grids = KernelGrids::with_sensor_half_width(&aperture, sys, cfg.sensor_half_width)?;
        if let Some(span) = spectral_span {
            grids.spectral = Grid1D::centered(span, grids.spectral.count())?;
        }
        let pair = blur_pair(&aperture, sys, lambda, &grids)?;
        let report = uncertainty_product(&aperture, sys, lambda, &grids)?;

        if cfg.formats.csv {
            write_atomic(
                &cfg.out_dir.join(format!("blur_hlambda_{i}.csv")),
                kernel_csv(&provenance, "lambda_offset_m", &pair.spectral).as_bytes(),
            )?;
            write_atomic(
                &cfg.out_dir.join(format!("blur_hx_{i}.csv")),
                kernel_csv(&provenance, "x_m", &pair.spatial).as_bytes(),
            )?;
        }

        // outer-product x–λ map, peak-normalized, decimated for output
        let li = decimate_indices(pair.spectral.grid().count(), 129);
        let xi = decimate_indices(pair.spatial.grid().count(), 129);
        let lpeak = pair.spectral.peak();
        let xpeak = pair.spatial.peak();
        let mut map = Vec::with_capacity(li.len() * xi.len());
        for &l in &li {
            for &x in &xi {
                map.push(pair.spectral.values()[l] / lpeak * pair.spatial.values()[x] / xpeak);
            }
        }
        if cfg.formats.csv {
            let mut csv = provenance.clone();
            csv.push_str("lambda_offset_m\\x_m");
            for &x in &xi {
                let _ = write!(csv, ",{:e}", pair.spatial.grid().coordinate(x));
            }
            csv.push('\n');
            for (r, &l) in li.iter().enumerate() {
                let _ = write!(csv, "{:e}", pair.spectral.grid().coordinate(l));
                for c in 0..xi.len() {
                    let _ = write!(csv, ",{:e}", map[r * xi.len() + c]);
                }
                csv.push('\n');
            }
            write_atomic(
                &cfg.out_dir.join(format!("blur_map_{i}.csv")),
                csv.as_bytes(),
            )?;
        }
        if cfg.formats.svg {
            let svg = svg_heatmap(
                &format!("x–λ blur intensity, {spec_str}"),
                "x (m)",
                "λ offset (m)",
                &map,
                xi.len(),
                li.len(),
                (pair.spatial.grid().start(), pair.spatial.grid().end()),
                (pair.spectral.grid().start(), pair.spectral.grid().end()),
            );
            write_atomic(
                &cfg.out_dir.join(format!("blur_map_{i}.svg")),
                svg.as_bytes(),
            )?;
        }

        let summary = format!(
            "{{\n  \"aperture\": \"{spec_str}\",\n  \"wavelength_m\": {lambda:e},\n  \
             \"sigma_lambda_m\": {:e},\n  \"sigma_x_m\": {:e},\n  \"product_m2\": {:e},\n  \
             \"bound_m2\": {:e},\n  \"ratio\": {:e}\n}}\n",
            report.sigma_lambda, report.sigma_x, report.product, report.bound, report.ratio
        );
        write_atomic(
            &cfg.out_dir.join(format!("blur_summary_{i}.json")),
            summary.as_bytes(),
        )?;

        println!(
            "aperture[{i}] {spec_str}: σ_λ = {}, σ_x = {}, product = {} (bound {}, ratio {:.6})",
            format_nm(report.sigma_lambda),
            format_um(report.sigma_x),
            format_nm_um(report.product),
            format_nm_um(report.bound),
            report.ratio
        );
    }
    Ok(())
}

/// `sweep`: width sweep of the uncertainty report plus the reciprocal-line
/// fit.
pub fn cmd_sweep(
    mut cfg: RunConfig,
    family: ApertureFamily,
    widths: &[f64],
    lambda: f64,
) -> CliResult<()> {
    cfg.note("family", family.name());
    cfg.note("lambda", format!("{lambda:e}"));
    cfg.note(
        "widths",
        widths
            .iter()
            .map(|w| format!("{w:e}"))
            .collect::<Vec<_>>()
            .join(";"),
    );
    let provenance = cfg.provenance_line("sweep");

    let rows = tradeoff_sweep(family, widths, &cfg.system, lambda, cfg.sensor_half_width)?;
    if cfg.formats.csv {
        let mut csv = provenance.clone();
        csv.push_str(&sweep_to_csv(&rows));
        write_atomic(
            &cfg.out_dir.join(format!("sweep_{}.csv", family.name())),
            csv.as_bytes(),
        )?;
    }

    let fit = fit_reciprocal_line(&rows)?;
    let bound = cfg.system.uncertainty_bound(lambda)?;
    let summary = format!(
        "{{\n  \"family\": \"{}\",\n  \"wavelength_m\": {lambda:e},\n  \"slope_per_m2\": {:e},\n  \
         \"bound_m2\": {:e},\n  \"slope_times_bound\": {:e},\n  \"r_squared\": {}\n}}\n",
        family.name(),
        fit.slope,
        bound,
        fit.slope * bound,
        fit.r_squared
    );
    write_atomic(&cfg.out_dir.join("sweep_fit.json"), summary.as_bytes())?;

    if cfg.formats.svg {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.report.sigma_lambda, 1.0 / r.report.sigma_x))
            .collect();
        let xmax = points.iter().map(|p| p.0).fold(0.0, f64::max);
        let line = [(0.0, 0.0), (xmax, fit.slope * xmax)];
        let svg = svg_line_plot(
            &format!("reciprocal tradeoff, {} family", family.name()),
            "σ_λ (m)",
            "1/σ_x (1/m)",
            &[
                Series {
                    label: "sweep".into(),
                    points: &points,
                },
                Series {
                    label: format!("fit: slope·bound = {:.5}", fit.slope * bound),
                    points: &line,
                },
            ],
        );
        write_atomic(&cfg.out_dir.join("sweep_reciprocal.svg"), svg.as_bytes())?;
    }

    println!(
        "sweep {}: {} widths, slope·bound = {:.6}, R² = {:.6}",
        family.name(),
        rows.len(),
        fit.slope * bound,
        fit.r_squared
    );
    Ok(())
}

/// `propagate`: plane magnitudes plus the oracle-vs-analytic agreement
/// report.
pub fn cmd_propagate(
    mut cfg: RunConfig,
    aperture_spec: &str,
    lambdas: &[f64],
    x0: f64,
    grid_size: usize,
) -> CliResult<()> {
    cfg.note("aperture", aperture_spec);
    cfg.note("x0", format!("{x0:e}"));
    cfg.note("grid_size", grid_size);
    cfg.note(
        "lambdas",
        lambdas
            .iter()
            .map(|l| format!("{l:e}"))
            .collect::<Vec<_>>()
            .join(";"),
    );
    let provenance = cfg.provenance_line("propagate");
    let sys = cfg.system;
    let aperture = spec::parse_aperture(aperture_spec)?;
    let grids = PropagationGrids::with_size(&sys, &aperture, grid_size)?;

    let mut agreement = provenance.clone();
    agreement.push_str("kernel,linf_rel_error\n");

    for (li, &lambda) in lambdas.iter().enumerate() {
        if !sys.contains_wavelength(lambda) {
            return Err(CliError::config(format!(
                "wavelength {lambda:e} m outside system range"
            )));
        }
        let line = SpectralLine {
            wavelength: lambda,
            intensity: 1.0,
        };
        let planes = propagate_planes(&grids, &aperture, x0, line, Plane::P5)?;
        if cfg.formats.csv {
            for field in &planes {
                let mags = field.magnitudes();
                let idx = decimate_indices(mags.len(), 8192);
                let mut csv = provenance.clone();
                csv.push_str("x_m,magnitude\n");
                for &i in &idx {
                    let _ = writeln!(csv, "{:e},{:e}", field.grid.coordinate(i), mags[i]);
                }
                write_atomic(
                    &cfg.out_dir
                        .join(format!("propagate_{li}_{}.csv", field.plane.name())),
                    csv.as_bytes(),
                )?;
            }
        }

        let source = PointSource::new(x0, vec![line])?;
        let center = sys.rainbow_position(lambda);

        // rainbow-plane kernel vs |a(-(x-λfν0))|²
        let p4 = measure(&source, &aperture, &grids, Plane::P4, None, None)?;
        let half = match &aperture {
            ApertureProfile::Gaussian { sigma } => 5.0 * sigma,
            other => 1.1 * other.footprint_half_width(),
        };
        let lo = p4.grid.nearest_index(center - half);
        let hi = p4.grid.nearest_index(center + half);
        let analytic: Vec<f64> = (lo..=hi)
            .map(|i| {
                let a = aperture.evaluate(-(p4.grid.coordinate(i) - center));
                a * a
            })
            .collect();
        let err_spectral = peak_normalized_linf_error(&p4.intensity[lo..=hi], &analytic);
        let _ = writeln!(agreement, "spectral_{li},{err_spectral:e}");

        // image-plane PSF vs |A(-x/λf)|² over the sensor window (recentered
        // onto the relayed source position)
        let p5 = measure(&source, &aperture, &grids, Plane::P5, None, None)?;
        let lo = p5.grid.nearest_index(x0 - cfg.sensor_half_width);
        let hi = p5.grid.nearest_index(x0 + cfg.sensor_half_width);
        let analytic: Vec<f64> = (lo..=hi)
            .map(|i| {
                aperture.fourier_psd(-(p5.grid.coordinate(i) - x0) / (lambda * sys.focal_length()))
            })
            .collect();
        let err_spatial = peak_normalized_linf_error(&p5.intensity[lo..=hi], &analytic);
        let _ = writeln!(agreement, "spatial_{li},{err_spatial:e}");

        if cfg.formats.svg {
            let norm = |v: &[f64]| {
                let m = v.iter().cloned().fold(0.0, f64::max);
                v.iter().map(|x| x / m).collect::<Vec<f64>>()
            };
            let meas: Vec<(f64, f64)> = (lo..=hi)
                .zip(norm(&p5.intensity[lo..=hi]))
                .map(|(i, v)| (p5.grid.coordinate(i), v))
                .collect();
            let ana: Vec<(f64, f64)> = (lo..=hi)
                .zip(norm(&analytic))
                .map(|(i, v)| (p5.grid.coordinate(i), v))
                .collect();
            let idx = decimate_indices(meas.len(), 1024);
            let meas: Vec<(f64, f64)> = idx.iter().map(|&i| meas[i]).collect();
            let ana: Vec<(f64, f64)> = idx.iter().map(|&i| ana[i]).collect();
            let svg = svg_line_plot(
                &format!("P5 PSF, {aperture_spec}, λ = {}", format_nm(lambda)),
                "x (m)",
                "normalized intensity",
                &[
                    Series {
                        label: "propagated".into(),
                        points: &meas,
                    },
                    Series {
                        label: "analytic".into(),
                        points: &ana,
                    },
                ],
            );
            write_atomic(
                &cfg.out_dir.join(format!("propagate_{li}_psf.svg")),
                svg.as_bytes(),
            )?;
        }

        println!(
            "λ = {}: P4 peak at {:e} m (λfν0 = {center:e}), L∞ spectral = {err_spectral:.3e}, spatial = {err_spatial:.3e}",
            format_nm(lambda),
            p4.peak_position()
        );
    }

    if cfg.formats.csv {
        write_atomic(&cfg.out_dir.join("agreement.csv"), agreement.as_bytes())?;
    }
    Ok(())
}

/// `filter-psf`: PSF std and peak against the mask's wavelength offset.
pub fn cmd_filter_psf(
    mut cfg: RunConfig,
    aperture_spec: &str,
    shape: MaskShape,
    offsets: &[f64],
    lambda: f64,
) -> CliResult<()> {
    cfg.note("aperture", aperture_spec);
    cfg.note("lambda", format!("{lambda:e}"));
    cfg.note(
        "mask_shape",
        match shape {
            MaskShape::Slit { width } => format!("slit:{width:e}"),
            MaskShape::Gaussian { sigma } => format!("gaussian:{sigma:e}"),
        },
    );
    cfg.note(
        "offsets",
        offsets
            .iter()
            .map(|o| format!("{o:e}"))
            .collect::<Vec<_>>()
            .join(";"),
    );
    let provenance = cfg.provenance_line("filter-psf");

    let aperture = spec::parse_aperture(aperture_spec)?;
    let x_grid = Grid1D::centered(cfg.sensor_half_width, 2049)?;
    let rows = psf_vs_offset_sweep(&aperture, shape, offsets, &cfg.system, lambda, x_grid)?;

    if cfg.formats.csv {
        let mut csv = provenance.clone();
        csv.push_str(&psf_sweep_to_csv(&rows));
        write_atomic(&cfg.out_dir.join("psf_offset_sweep.csv"), csv.as_bytes())?;
    }
    if cfg.formats.svg {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| r.psf_std.map(|s| (r.delta_lambda, s)))
            .collect();
        let svg = svg_line_plot(
            &format!("filtered PSF spread vs mask offset, {aperture_spec}"),
            "Δλ (m)",
            "PSF std (m)",
            &[Series {
                label: "psf_std".into(),
                points: &pts,
            }],
        );
        write_atomic(&cfg.out_dir.join("psf_offset_sweep.svg"), svg.as_bytes())?;
    }

    let blocked = rows.iter().filter(|r| r.psf_std.is_none()).count();
    println!(
        "filter-psf: {} offsets, {} fully blocked",
        rows.len(),
        blocked
    );
    Ok(())
}

/// `scene`: spectral filtering of an HSICUBE scene, with and without the
/// mask.
#[allow(clippy::too_many_arguments)]
pub fn cmd_scene(
    mut cfg: RunConfig,
    cube_path: &Path,
    aperture_spec: &str,
    mask_spec: Option<&str>,
    pixel_pitch: f64,
    central_lambda_approx: bool,
    ideal_filter: bool,
) -> CliResult<()> {
    cfg.note("cube", cube_path.display());
    cfg.note("aperture", aperture_spec);
    cfg.note("mask", mask_spec.unwrap_or("none"));
    cfg.note("pixel_pitch", format!("{pixel_pitch:e}"));
    cfg.note("central_lambda_approx", central_lambda_approx);
    cfg.note("ideal_filter", ideal_filter);
    let provenance = cfg.provenance_line("scene");

    let cube = hsicube::read_cube(cube_path)?;
    let aperture = spec::parse_aperture(aperture_spec)?;
    let mask: Option<RainbowMask> = mask_spec.map(spec::parse_mask).transpose()?;
    let options = SceneOptions {
        pixel_pitch,
        psf_mode: if central_lambda_approx {
            PsfMode::CentralWavelength
        } else {
            PsfMode::PerWavelength
        },
        kernel_half_width: cfg.sensor_half_width,
    };

    let filter = match (&mask, ideal_filter) {
        (Some(m), false) => SpectralFilter::Mask(m.clone()),
        (Some(m), true) => SpectralFilter::IdealMask(m.clone()),
        (None, _) => SpectralFilter::Identity,
    };
    let filtered = filter_scene(&cube, &filter, &aperture, &cfg.system, &options)?;
    let unfiltered = filter_scene(
        &cube,
        &SpectralFilter::Identity,
        &aperture,
        &cfg.system,
        &options,
    )?;

    let image_csv = |img: &Image2D| {
        let mut csv = provenance.clone();
        for y in 0..img.height {
            let row: Vec<String> = img.row(y).iter().map(|v| format!("{v:e}")).collect();
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
        csv
    };
    if cfg.formats.csv {
        write_atomic(
            &cfg.out_dir.join("scene_filtered.csv"),
            image_csv(&filtered).as_bytes(),
        )?;
        write_atomic(
            &cfg.out_dir.join("scene_unfiltered.csv"),
            image_csv(&unfiltered).as_bytes(),
        )?;
    }
    write_atomic(
        &cfg.out_dir.join("scene_filtered.pgm"),
        &pgm16(&filtered.data, filtered.width, filtered.height),
    )?;
    write_atomic(
        &cfg.out_dir.join("scene_unfiltered.pgm"),
        &pgm16(&unfiltered.data, unfiltered.width, unfiltered.height),
    )?;

    if let Some(mask) = &mask {
        let effective =
            effective_spectral_filter(mask, &aperture, &cfg.system, cube.wavelengths())?;
        let ideal = ideal_spectral_filter(mask, &cfg.system, cube.wavelengths());
        if cfg.formats.csv {
            let mut csv = provenance.clone();
            csv.push_str("lambda_m,effective_transmission,ideal_transmission\n");
            for (i, l) in cube.wavelengths().iter().enumerate() {
                let _ = writeln!(csv, "{l:e},{:e},{:e}", effective[i], ideal[i]);
            }
            write_atomic(&cfg.out_dir.join("filter_transmission.csv"), csv.as_bytes())?;
        }
    }

    let summary = format!(
        "{{\n  \"filtered_energy\": {:e},\n  \"unfiltered_energy\": {:e},\n  \
         \"energy_ratio\": {:e},\n  \"filtered_x_std_px\": {:e},\n  \"unfiltered_x_std_px\": {:e}\n}}\n",
        filtered.energy(),
        unfiltered.energy(),
        filtered.energy() / unfiltered.energy(),
        filtered.x_std_pixels(),
        unfiltered.x_std_pixels()
    );
    write_atomic(&cfg.out_dir.join("scene_summary.json"), summary.as_bytes())?;

    println!(
        "scene: energy ratio {:.4}, x-std {:.2} px (unfiltered {:.2} px)",
        filtered.energy() / unfiltered.energy(),
        filtered.x_std_pixels(),
        unfiltered.x_std_pixels()
    );
    Ok(())
}

/// `mtf`: contrast-threshold resolution sweep.
pub fn cmd_mtf(
    mut cfg: RunConfig,
    family: ApertureFamily,
    widths: &[f64],
    lambda: f64,
    threshold: f64,
) -> CliResult<()> {
    cfg.note("family", family.name());
    cfg.note("lambda", format!("{lambda:e}"));
    cfg.note("threshold", threshold);
    cfg.note(
        "widths",
        widths
            .iter()
            .map(|w| format!("{w:e}"))
            .collect::<Vec<_>>()
            .join(";"),
    );
    let provenance = cfg.provenance_line("mtf");

    let rows = mtf_tradeoff_sweep(
        family,
        widths,
        &cfg.system,
        lambda,
        threshold,
        cfg.sensor_half_width,
    )?;
    if cfg.formats.csv {
        let mut csv = provenance.clone();
        csv.push_str(&mtf_sweep_to_csv(&rows, threshold));
        write_atomic(
            &cfg.out_dir.join(format!("mtf_{}.csv", family.name())),
            csv.as_bytes(),
        )?;
    }
    if cfg.formats.svg {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.spectral_resolution, r.spatial_resolution))
            .collect();
        let svg = svg_line_plot(
            &format!(
                "resolution tradeoff at {:.0}% contrast, {} family",
                100.0 * threshold,
                family.name()
            ),
            "spectral resolution (cycles/m of λ)",
            "spatial resolution (cycles/m)",
            &[Series {
                label: "sweep".into(),
                points: &pts,
            }],
        );
        write_atomic(
            &cfg.out_dir.join(format!("mtf_{}.svg", family.name())),
            svg.as_bytes(),
        )?;
    }
    println!(
        "mtf {}: {} widths at {:.0}% contrast",
        family.name(),
        rows.len(),
        100.0 * threshold
    );
    Ok(())
}

/// Parameters for `gen-cube`.
pub struct GenCubeParams {
    pub kind: String,
    pub out_file: PathBuf,
    pub width: usize,
    pub height: usize,
    pub period: usize,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub lambdas: Option<Vec<f64>>,
}

/// `gen-cube`: synthetic two-laser and bar-target scenes.
pub fn cmd_gen_cube(params: &GenCubeParams) -> CliResult<()> {
    let cube = match params.kind.as_str() {
        "two-laser" => two_laser_cube(
            params.width,
            params.height,
            (params.width / 4, params.height / 2),
            (3 * params.width / 4, params.height / 2),
            params.lambda_a,
            params.lambda_b,
        )?,
        "bars" => {
            let lambdas = params
                .lambdas
                .clone()
                .unwrap_or_else(|| (0..9).map(|k| 450e-9 + k as f64 * 25e-9).collect());
            spectro_core::filtering::bar_target_cube(
                params.width,
                params.height,
                params.period,
                lambdas,
            )?
        }
        other => {
            return Err(CliError::config(format!(
                "unknown cube kind '{other}' (two-laser, bars)"
            )))
        }
    };
    write_atomic(&params.out_file, hsicube::format_cube(&cube).as_bytes())?;
    println!(
        "gen-cube: wrote {} ({}×{}, {} wavelengths)",
        params.out_file.display(),
        cube.width(),
        cube.height(),
        cube.wavelengths().len()
    );
    Ok(())
}

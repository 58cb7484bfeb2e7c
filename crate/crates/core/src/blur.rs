//! Closed-form spectral and spatial blur kernels of a pupil code, their
//! standard deviations, and the space-spectrum bandwidth product.
//!
//! For a pupil amplitude `a(x)` with transform `A(u)` the kernels are
//! `h_λ(ℓ) = |a(-ℓ·f·ν0)|²` and `h_x(x) = |A(-x/(λf))|²`. Both are relative
//! blurs centered on 0; the absolute rainbow-plane offset `λ·f·ν0` belongs to
//! the filtering and propagation modules.
//!
//! Heavy-tailed PSFs (slit → sinc²) have no finite second moment on an
//! infinite domain, so spatial moments are always taken over a finite sensor
//! window (default ±1 mm) and reported together with it.

use crate::aperture::ApertureProfile;
use crate::error::{positive, Error, Result};
use crate::grid::{trapezoid_integral, Grid1D};
use crate::kernel::{AxisKind, SampledKernel};
use crate::system::OpticalSystem;

/// Fraction of analytic kernel mass a grid must capture.
pub const MASS_CAPTURE: f64 = 0.9999;

/// Default half-width of the sensor window for spatial moments.
pub const DEFAULT_SENSOR_HALF_WIDTH: f64 = 1e-3;

const SPECTRAL_SAMPLES: usize = 2049;
const SPATIAL_SAMPLES: usize = 4097;

/// Grids on which the two kernels of one configuration are sampled.
#[derive(Debug, Clone, Copy)]
pub struct KernelGrids {
    pub spectral: Grid1D,
    pub spatial: Grid1D,
}

impl KernelGrids {
    /// Policy grids: the spectral grid spans the kernel comfortably
    /// (±5σ-equivalent for the gaussian, twice the support for slits) and the
    /// spatial grid spans the default sensor window.
    pub fn recommended(aperture: &ApertureProfile, system: &OpticalSystem) -> Result<Self> {
        Self::with_sensor_half_width(aperture, system, DEFAULT_SENSOR_HALF_WIDTH)
    }

    pub fn with_sensor_half_width(
        aperture: &ApertureProfile,
        system: &OpticalSystem,
        sensor_half_width: f64,
    ) -> Result<Self> {
        let f_nu0 = system.f_nu0();
        let spectral_half = match aperture {
            ApertureProfile::Gaussian { sigma } => {
                5.0 * sigma / (core::f64::consts::SQRT_2 * f_nu0)
            }
            ApertureProfile::Slit { width } | ApertureProfile::Open { max_width: width } => {
                width / f_nu0
            }
            ApertureProfile::Sampled { .. } => 1.2 * aperture.footprint_half_width() / f_nu0,
        };
        Ok(KernelGrids {
            spectral: Grid1D::centered(spectral_half, SPECTRAL_SAMPLES)?,
            spatial: Grid1D::centered(sensor_half_width, SPATIAL_SAMPLES)?,
        })
    }
}

/// Spectral blur kernel `h_λ(ℓ) = |a(-ℓ·f·ν0)|²` sampled on `lambda_grid`
/// (wavelength offsets around the scene wavelength).
///
/// Errors with [`Error::Truncation`] when the grid captures less than 99.99%
/// of the analytic mass (gaussian) or clips the finite support (slit kinds).
pub fn spectral_blur(
    aperture: &ApertureProfile,
    system: &OpticalSystem,
    lambda_grid: Grid1D,
) -> Result<SampledKernel> {
    let f_nu0 = system.f_nu0();
    let values: Vec<f64> = lambda_grid
        .iter()
        .map(|l| {
            let a = aperture.evaluate(-l * f_nu0);
            a * a
        })
        .collect();

    let captured_fraction = match aperture {
        ApertureProfile::Gaussian { sigma } => {
            let mass = trapezoid_integral(&values, lambda_grid.step());
            let analytic = sigma / f_nu0 * core::f64::consts::PI.sqrt();
            mass / analytic
        }
        ApertureProfile::Slit { width } | ApertureProfile::Open { max_width: width } => {
            let support_half = 0.5 * width / f_nu0;
            let lo = lambda_grid.start().max(-support_half);
            let hi = lambda_grid.end().min(support_half);
            ((hi - lo) / (2.0 * support_half)).clamp(0.0, 1.0)
        }
        ApertureProfile::Sampled { .. } => 1.0,
    };
    if captured_fraction < MASS_CAPTURE {
        return Err(Error::Truncation {
            captured: captured_fraction,
            required: MASS_CAPTURE,
        });
    }

    SampledKernel::new(lambda_grid, values, AxisKind::Wavelength)
}

/// Spatial blur kernel (PSF) `h_x(x) = |A(-x/(λf))|²` sampled on `x_grid`,
/// the sensor window. `λ` must lie inside the system band.
pub fn spatial_blur(
    aperture: &ApertureProfile,
    system: &OpticalSystem,
    wavelength: f64,
    x_grid: Grid1D,
) -> Result<SampledKernel> {
    if !system.contains_wavelength(wavelength) {
        return Err(Error::validation(format!(
            "wavelength {wavelength:e} m outside system range [{:e}, {:e}]",
            system.wavelength_min(),
            system.wavelength_max()
        )));
    }
    let lambda_f = wavelength * system.focal_length();
    let values: Vec<f64> = x_grid
        .iter()
        .map(|x| aperture.fourier_psd(-x / lambda_f))
        .collect();
    SampledKernel::new(x_grid, values, AxisKind::Space)
}

/// The two kernels of one configuration, tagged with the wavelength that
/// scales the spatial one.
#[derive(Debug, Clone)]
pub struct BlurPair {
    pub spectral: SampledKernel,
    pub spatial: SampledKernel,
    pub eval_wavelength: f64,
}

pub fn blur_pair(
    aperture: &ApertureProfile,
    system: &OpticalSystem,
    wavelength: f64,
    grids: &KernelGrids,
) -> Result<BlurPair> {
    Ok(BlurPair {
        spectral: spectral_blur(aperture, system, grids.spectral)?,
        spatial: spatial_blur(aperture, system, wavelength, grids.spatial)?,
        eval_wavelength: wavelength,
    })
}

/// Standard deviations, their product, and the product measured against the
/// `λ/(4πν0)` lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub sigma_lambda: f64,
    pub sigma_x: f64,
    pub product: f64,
    pub bound: f64,
    pub ratio: f64,
}

pub fn uncertainty_product(
    aperture: &ApertureProfile,
    system: &OpticalSystem,
    wavelength: f64,
    grids: &KernelGrids,
) -> Result<UncertaintyReport> {
    let pair = blur_pair(aperture, system, wavelength, grids)?;
    let sigma_lambda = pair.spectral.std_dev()?;
    let sigma_x = pair.spatial.std_dev()?;
    let product = sigma_lambda * sigma_x;
    let bound = system.uncertainty_bound(wavelength)?;
    Ok(UncertaintyReport {
        sigma_lambda,
        sigma_x,
        product,
        bound,
        ratio: product / bound,
    })
}

/// Built-in single-parameter aperture families for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApertureFamily {
    /// Width parameter is the gaussian σ.
    Gaussian,
    /// Width parameter is the slit full width.
    Slit,
}

impl ApertureFamily {
    pub fn build(&self, width: f64) -> Result<ApertureProfile> {
        match self {
            ApertureFamily::Gaussian => ApertureProfile::gaussian(width),
            ApertureFamily::Slit => ApertureProfile::slit(width),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ApertureFamily::Gaussian => "gaussian",
            ApertureFamily::Slit => "slit",
        }
    }
}

/// One row of a width sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub width: f64,
    pub report: UncertaintyReport,
}

/// Evaluates the uncertainty report across an ascending list of widths.
/// σ_λ grows and σ_x shrinks along the gaussian family while the product
/// stays pinned at the bound.
pub fn tradeoff_sweep(
    family: ApertureFamily,
    widths: &[f64],
    system: &OpticalSystem,
    wavelength: f64,
    sensor_half_width: f64,
) -> Result<Vec<SweepRow>> {
    if widths.iter().any(|w| !positive(*w)) {
        return Err(Error::validation("sweep widths must be positive"));
    }
    if widths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("sweep widths must be strictly ascending"));
    }
    widths
        .iter()
        .map(|&width| {
            let aperture = family.build(width)?;
            let grids = KernelGrids::with_sensor_half_width(&aperture, system, sensor_half_width)?;
            let report = uncertainty_product(&aperture, system, wavelength, &grids)?;
            Ok(SweepRow { width, report })
        })
        .collect()
}

/// Least-squares line through the origin for `1/σ_x` against `σ_λ`. A
/// constant product makes this a perfect reciprocal line with slope
/// `1/bound`.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub slope: f64,
    pub r_squared: f64,
}

pub fn fit_reciprocal_line(rows: &[SweepRow]) -> Result<LineFit> {
    if rows.len() < 2 {
        return Err(Error::validation(
            "reciprocal fit needs at least two sweep rows",
        ));
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.report.sigma_lambda, 1.0 / r.report.sigma_x))
        .collect();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let slope = sxy / sxx;
    let mean_y: f64 = points.iter().map(|(_, y)| y).sum::<f64>() / points.len() as f64;
    let ss_res: f64 = points.iter().map(|(x, y)| (y - slope * x).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    Ok(LineFit {
        slope,
        r_squared: if ss_tot > 0.0 {
            1.0 - ss_res / ss_tot
        } else {
            1.0
        },
    })
}

/// CSV serialization of a sweep table (no trailing newline variance; header
/// is part of the contract).
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("width_m,sigma_lambda_m,sigma_x_m,product_m2,bound_m2,ratio\n");
    for row in rows {
        let r = &row.report;
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{:e}\n",
            row.width, r.sigma_lambda, r.sigma_x, r.product, r.bound, r.ratio
        ));
    }
    out
}

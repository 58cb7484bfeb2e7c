//! Rainbow-plane (P4) masks: programmable spectral filters, the narrowband
//! filter PSF analysis, and scene-level spectral filtering of hyperspectral
//! cubes.
//!
//! A monochromatic scene line at `λ1` lights up the rainbow plane with the
//! shifted pupil footprint `a(x - λ1·f·ν0)`; a mask `t(x)` centered on `λ2`
//! multiplies it pointwise. The product's shape sets the filtered PSF and its
//! energy sets the effective spectral transmission, which is the mask's
//! intensity transmission smeared by the pupil's spectral footprint — a
//! narrow pupil filters sharply, an open pupil cannot.

use crate::aperture::ApertureProfile;
use crate::blur::spatial_blur;
use crate::error::{positive, Error, Result};
use crate::grid::{trapezoid_integral, trapezoid_weight, Grid1D};
use crate::kernel::{AxisKind, SampledKernel};
use crate::system::OpticalSystem;

/// Amplitude-transmission mask on the rainbow plane. Centers are given as
/// wavelengths and map to plane coordinates through `x = λ·f·ν0`; widths are
/// rainbow-plane lengths.
#[derive(Debug, Clone, PartialEq)]
pub enum RainbowMask {
    Slit {
        center_wavelength: f64,
        width: f64,
    },
    /// `t(x) = exp(-(x-c)²/2σ²)`, the same convention as the gaussian pupil.
    Gaussian {
        center_wavelength: f64,
        sigma: f64,
    },
    /// Complement of a slit: blocks a band, passes everything else.
    Blocker {
        center_wavelength: f64,
        width: f64,
    },
    /// Sampled transmission in plane coordinates; opaque outside its grid.
    Sampled {
        grid: Grid1D,
        transmission: Vec<f64>,
    },
}

impl RainbowMask {
    pub fn slit(center_wavelength: f64, width: f64) -> Result<Self> {
        Self::check_center_width(center_wavelength, width)?;
        Ok(RainbowMask::Slit {
            center_wavelength,
            width,
        })
    }

    pub fn gaussian(center_wavelength: f64, sigma: f64) -> Result<Self> {
        Self::check_center_width(center_wavelength, sigma)?;
        Ok(RainbowMask::Gaussian {
            center_wavelength,
            sigma,
        })
    }

    pub fn blocker(center_wavelength: f64, width: f64) -> Result<Self> {
        Self::check_center_width(center_wavelength, width)?;
        Ok(RainbowMask::Blocker {
            center_wavelength,
            width,
        })
    }

    pub fn sampled(grid: Grid1D, transmission: Vec<f64>) -> Result<Self> {
        if transmission.len() != grid.count() {
            return Err(Error::validation(
                "mask transmission length must match grid count",
            ));
        }
        if transmission
            .iter()
            .any(|t| !t.is_finite() || *t < 0.0 || *t > 1.0)
        {
            return Err(Error::validation("mask transmission must lie in [0, 1]"));
        }
        Ok(RainbowMask::Sampled { grid, transmission })
    }

    fn check_center_width(center: f64, width: f64) -> Result<()> {
        if !positive(center) {
            return Err(Error::validation("mask center wavelength must be positive"));
        }
        if !positive(width) {
            return Err(Error::validation("mask width must be positive"));
        }
        Ok(())
    }

    /// Amplitude transmission at plane coordinate `x`.
    pub fn transmission(&self, system: &OpticalSystem, x: f64) -> f64 {
        match self {
            RainbowMask::Slit {
                center_wavelength,
                width,
            } => {
                let c = system.rainbow_position(*center_wavelength);
                if (x - c).abs() <= 0.5 * width {
                    1.0
                } else {
                    0.0
                }
            }
            RainbowMask::Gaussian {
                center_wavelength,
                sigma,
            } => {
                let d = x - system.rainbow_position(*center_wavelength);
                (-d * d / (2.0 * sigma * sigma)).exp()
            }
            RainbowMask::Blocker {
                center_wavelength,
                width,
            } => {
                let c = system.rainbow_position(*center_wavelength);
                if (x - c).abs() <= 0.5 * width {
                    0.0
                } else {
                    1.0
                }
            }
            RainbowMask::Sampled { grid, transmission } => grid.interpolate(transmission, x),
        }
    }

    fn plane_half_width(&self) -> f64 {
        match self {
            RainbowMask::Slit { width, .. } | RainbowMask::Blocker { width, .. } => 0.5 * width,
            RainbowMask::Gaussian { sigma, .. } => 6.0 * sigma,
            RainbowMask::Sampled { grid, .. } => 0.5 * grid.extent(),
        }
    }

    fn plane_center(&self, system: &OpticalSystem) -> f64 {
        match self.center_wavelength() {
            Some(c) => system.rainbow_position(c),
            None => match self {
                RainbowMask::Sampled { grid, .. } => 0.5 * (grid.start() + grid.end()),
                _ => unreachable!("built-in masks carry a center wavelength"),
            },
        }
    }

    /// Center wavelength of the built-in kinds; sampled masks have none.
    pub fn center_wavelength(&self) -> Option<f64> {
        match self {
            RainbowMask::Slit {
                center_wavelength, ..
            }
            | RainbowMask::Gaussian {
                center_wavelength, ..
            }
            | RainbowMask::Blocker {
                center_wavelength, ..
            } => Some(*center_wavelength),
            RainbowMask::Sampled { .. } => None,
        }
    }
}

/// Pointwise product of the shifted pupil footprint and the mask on P4.
/// May be identically zero (fully blocked) — check [`MaskedProfile::peak`].
#[derive(Debug, Clone)]
pub struct MaskedProfile {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl MaskedProfile {
    pub fn peak(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn is_blocked(&self) -> bool {
        !positive(self.peak())
    }

    /// Support extent measured as the number of strictly positive samples
    /// times the step (each sample stands for one step-wide cell, which keeps
    /// the estimate within one step of the true width wherever the edges
    /// fall).
    pub fn support_width(&self) -> Option<f64> {
        let first = self.values.iter().position(|v| *v > 0.0)?;
        let last = self.values.iter().rposition(|v| *v > 0.0)?;
        Some((last - first + 1) as f64 * self.grid.step())
    }

    /// Centroid-referenced second-moment std of the profile.
    pub fn shape_std(&self) -> Result<f64> {
        let mass = trapezoid_integral(&self.values, self.grid.step());
        if !positive(mass) {
            return Err(Error::ZeroMass);
        }
        let first: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| self.grid.coordinate(i) * v * trapezoid_weight(i, self.values.len()))
            .sum::<f64>()
            * self.grid.step();
        let centroid = first / mass;
        let second: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let d = self.grid.coordinate(i) - centroid;
                d * d * v * trapezoid_weight(i, self.values.len())
            })
            .sum::<f64>()
            * self.grid.step();
        Ok((second / mass).sqrt())
    }
}

const MASKED_PROFILE_SAMPLES: usize = 4097;

fn pupil_plane_half_width(aperture: &ApertureProfile) -> f64 {
    match aperture {
        ApertureProfile::Gaussian { sigma } => 6.0 * sigma,
        _ => aperture.footprint_half_width(),
    }
}

/// Effective rainbow-plane profile `a(x - λ1·f·ν0)·t(x)` for a source line at
/// `λ1` behind the mask, sampled on an automatically sized P4 grid.
pub fn masked_aperture_product(
    aperture: &ApertureProfile,
    mask: &RainbowMask,
    source_wavelength: f64,
    system: &OpticalSystem,
) -> Result<MaskedProfile> {
    if !system.contains_wavelength(source_wavelength) {
        return Err(Error::validation("source wavelength outside system range"));
    }
    if let Some(c) = mask.center_wavelength() {
        if !system.contains_wavelength(c) {
            return Err(Error::validation(
                "mask center wavelength outside system range",
            ));
        }
    }
    let c1 = system.rainbow_position(source_wavelength);
    let h1 = pupil_plane_half_width(aperture);
    let c2 = mask.plane_center(system);
    let h2 = mask.plane_half_width();
    let lo = (c1 - h1).min(c2 - h2);
    let hi = (c1 + h1).max(c2 + h2);
    let step = (hi - lo) / (MASKED_PROFILE_SAMPLES - 1) as f64;
    let grid = Grid1D::new(lo, step, MASKED_PROFILE_SAMPLES)?;

    let values: Vec<f64> = grid
        .iter()
        .map(|x| aperture.evaluate(x - c1) * mask.transmission(system, x))
        .collect();
    Ok(MaskedProfile { grid, values })
}

/// Spatial PSF of the masked system at `λ_source`, sampled on `x_grid` (the
/// sensor window): the squared transform magnitude of the masked profile.
/// Errors with [`Error::FullyBlocked`] when the product is identically zero.
pub fn filtered_psf(
    aperture: &ApertureProfile,
    mask: &RainbowMask,
    source_wavelength: f64,
    system: &OpticalSystem,
    x_grid: Grid1D,
) -> Result<SampledKernel> {
    let profile = masked_aperture_product(aperture, mask, source_wavelength, system)?;
    if profile.is_blocked() {
        return Err(Error::FullyBlocked);
    }
    let lambda_f = source_wavelength * system.focal_length();
    let n = profile.values.len();
    let step = profile.grid.step();

    let values: Vec<f64> = x_grid
        .iter()
        .map(|x| {
            let u = -x / lambda_f;
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for (j, p) in profile.values.iter().enumerate() {
                if *p == 0.0 {
                    continue;
                }
                let w = p * trapezoid_weight(j, n);
                let phase = -core::f64::consts::TAU * u * profile.grid.coordinate(j);
                re += w * phase.cos();
                im += w * phase.sin();
            }
            (re * re + im * im) * step * step
        })
        .collect();
    SampledKernel::new(x_grid, values, AxisKind::Space)
}

/// One row of a PSF-versus-filter-offset sweep. `psf_std` is absent when the
/// offset blocks the light entirely.
#[derive(Debug, Clone, Copy)]
pub struct PsfSweepRow {
    pub delta_lambda: f64,
    pub psf_std: Option<f64>,
    pub peak_intensity: f64,
}

/// Single-parameter mask families for offset sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaskShape {
    Slit { width: f64 },
    Gaussian { sigma: f64 },
}

impl MaskShape {
    pub fn at_center(&self, center_wavelength: f64) -> Result<RainbowMask> {
        match self {
            MaskShape::Slit { width } => RainbowMask::slit(center_wavelength, *width),
            MaskShape::Gaussian { sigma } => RainbowMask::gaussian(center_wavelength, *sigma),
        }
    }
}

/// Sweeps the mask center across `λ_source + Δλ` and reports the filtered PSF
/// std and peak. Gaussian pupil + gaussian mask stays flat; slit pairs
/// broaden with |Δλ| until they block.
pub fn psf_vs_offset_sweep(
    aperture: &ApertureProfile,
    shape: MaskShape,
    offsets: &[f64],
    system: &OpticalSystem,
    source_wavelength: f64,
    x_grid: Grid1D,
) -> Result<Vec<PsfSweepRow>> {
    offsets
        .iter()
        .map(|&delta_lambda| {
            let mask = shape.at_center(source_wavelength + delta_lambda)?;
            match filtered_psf(aperture, &mask, source_wavelength, system, x_grid) {
                Ok(psf) => Ok(PsfSweepRow {
                    delta_lambda,
                    psf_std: Some(psf.std_dev()?),
                    peak_intensity: psf.peak(),
                }),
                Err(Error::FullyBlocked) => Ok(PsfSweepRow {
                    delta_lambda,
                    psf_std: None,
                    peak_intensity: 0.0,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// CSV serialization of a PSF offset sweep; blocked rows leave the std cell
/// empty and report zero peak.
pub fn psf_sweep_to_csv(rows: &[PsfSweepRow]) -> String {
    let mut out = String::from("delta_lambda_m,psf_std_m,peak_intensity\n");
    for row in rows {
        match row.psf_std {
            Some(std) => out.push_str(&format!(
                "{:e},{:e},{:e}\n",
                row.delta_lambda, std, row.peak_intensity
            )),
            None => out.push_str(&format!(
                "{:e},,{:e}\n",
                row.delta_lambda, row.peak_intensity
            )),
        }
    }
    out
}

/// Intensity transmission the mask-plus-pupil pair applies to a scene line at
/// `λ`: the mask's squared transmission integrated against the pupil's
/// rainbow-plane intensity footprint. This is where the space-spectrum
/// tradeoff bites scene filtering: the footprint width is the spectral blur.
pub fn effective_spectral_filter(
    mask: &RainbowMask,
    aperture: &ApertureProfile,
    system: &OpticalSystem,
    wavelengths: &[f64],
) -> Result<Vec<f64>> {
    let half = pupil_plane_half_width(aperture);
    let grid = Grid1D::centered(half, 2049)?;
    let footprint: Vec<f64> = grid
        .iter()
        .map(|u| {
            let a = aperture.evaluate(u);
            a * a
        })
        .collect();
    let norm = trapezoid_integral(&footprint, grid.step());
    if !positive(norm) {
        return Err(Error::ZeroMass);
    }
    Ok(wavelengths
        .iter()
        .map(|&lambda| {
            let c = system.rainbow_position(lambda);
            let weighted: Vec<f64> = grid
                .iter()
                .zip(&footprint)
                .map(|(u, fp)| {
                    let t = mask.transmission(system, c + u);
                    fp * t * t
                })
                .collect();
            (trapezoid_integral(&weighted, grid.step()) / norm).clamp(0.0, 1.0)
        })
        .collect())
}

/// Idealized filter that ignores the pupil's spectral blur: the mask's
/// squared transmission sampled at `x = λ·f·ν0`. Kept for comparison against
/// [`effective_spectral_filter`].
pub fn ideal_spectral_filter(
    mask: &RainbowMask,
    system: &OpticalSystem,
    wavelengths: &[f64],
) -> Vec<f64> {
    wavelengths
        .iter()
        .map(|&lambda| {
            let t = mask.transmission(system, system.rainbow_position(lambda));
            t * t
        })
        .collect()
}

/// Desk-scale hyperspectral raster `H(x, y, λ)`, wavelength-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperspectralCube {
    width: usize,
    height: usize,
    wavelengths: Vec<f64>,
    data: Vec<f64>,
}

impl HyperspectralCube {
    pub fn new(width: usize, height: usize, wavelengths: Vec<f64>, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::validation("cube dimensions must be nonzero"));
        }
        if wavelengths.is_empty() {
            return Err(Error::validation("cube needs at least one wavelength"));
        }
        if wavelengths.iter().any(|l| !positive(*l)) {
            return Err(Error::validation("cube wavelengths must be positive"));
        }
        if wavelengths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation(
                "cube wavelengths must be strictly ascending",
            ));
        }
        if data.len() != width * height * wavelengths.len() {
            return Err(Error::validation(
                "cube data length must equal width*height*nlambda",
            ));
        }
        if data.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::validation(
                "cube data must be finite and nonnegative",
            ));
        }
        Ok(HyperspectralCube {
            width,
            height,
            wavelengths,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Row-major `width×height` raster of wavelength plane `l`.
    pub fn plane(&self, l: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.data[l * n..(l + 1) * n]
    }

    pub fn value(&self, x: usize, y: usize, l: usize) -> f64 {
        self.data[l * self.width * self.height + y * self.width + x]
    }

    /// Trapezoid-weighted integral over the wavelength axis (plain sum for a
    /// single plane): the unfiltered, unblurred grayscale image.
    pub fn spectral_sum_image(&self) -> Image2D {
        let weights = wavelength_weights(&self.wavelengths);
        let mut out = vec![0.0; self.width * self.height];
        for (l, w) in weights.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(self.plane(l)) {
                *o += w * v;
            }
        }
        Image2D {
            width: self.width,
            height: self.height,
            data: out,
        }
    }
}

/// Quadrature weights for a (possibly irregular) ascending wavelength axis.
fn wavelength_weights(wavelengths: &[f64]) -> Vec<f64> {
    let n = wavelengths.len();
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| {
            if i == 0 {
                0.5 * (wavelengths[1] - wavelengths[0])
            } else if i + 1 == n {
                0.5 * (wavelengths[n - 1] - wavelengths[n - 2])
            } else {
                0.5 * (wavelengths[i + 1] - wavelengths[i - 1])
            }
        })
        .collect()
}

/// A grayscale image produced by spectral filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct Image2D {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Image2D {
    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Column sums: intensity profile along x.
    pub fn x_profile(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.width];
        for y in 0..self.height {
            for (x, v) in self.row(y).iter().enumerate() {
                p[x] += v;
            }
        }
        p
    }

    /// Centroid-referenced std of the x profile, in pixels.
    pub fn x_std_pixels(&self) -> f64 {
        let p = self.x_profile();
        let mass: f64 = p.iter().sum();
        if !positive(mass) {
            return 0.0;
        }
        let centroid: f64 = p.iter().enumerate().map(|(x, v)| x as f64 * v).sum::<f64>() / mass;
        let second: f64 = p
            .iter()
            .enumerate()
            .map(|(x, v)| (x as f64 - centroid).powi(2) * v)
            .sum::<f64>()
            / mass;
        second.sqrt()
    }
}

/// The spectral filter applied by [`filter_scene`].
#[derive(Debug, Clone)]
pub enum SpectralFilter {
    /// `f(λ) ≡ 1`.
    Identity,
    /// Explicit transmissions sampled on the cube's wavelength axis.
    Samples(Vec<f64>),
    /// Rainbow-plane mask, smeared by the pupil's spectral footprint.
    Mask(RainbowMask),
    /// Rainbow-plane mask sampled at `λ·f·ν0` with no pupil smearing.
    IdealMask(RainbowMask),
}

/// PSF handling for scene filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsfMode {
    /// Convolve each wavelength slice with its own PSF (exact model).
    PerWavelength,
    /// One PSF at the central wavelength of the cube's range for all slices.
    CentralWavelength,
}

#[derive(Debug, Clone, Copy)]
pub struct SceneOptions {
    /// Physical pitch of one cube pixel along x.
    pub pixel_pitch: f64,
    pub psf_mode: PsfMode,
    /// Half-width of the PSF kernel support (the sensor window).
    pub kernel_half_width: f64,
}

impl Default for SceneOptions {
    fn default() -> Self {
        SceneOptions {
            pixel_pitch: 4e-6,
            psf_mode: PsfMode::PerWavelength,
            kernel_half_width: crate::blur::DEFAULT_SENSOR_HALF_WIDTH,
        }
    }
}

/// Grayscale capture `I(x,y) = ∫ H(x,y,λ)·f(λ) dλ` with each wavelength slice
/// convolved along x by the pupil's PSF at that wavelength.
pub fn filter_scene(
    cube: &HyperspectralCube,
    filter: &SpectralFilter,
    aperture: &ApertureProfile,
    system: &OpticalSystem,
    options: &SceneOptions,
) -> Result<Image2D> {
    if !positive(options.pixel_pitch) {
        return Err(Error::validation("pixel pitch must be positive"));
    }
    for l in cube.wavelengths() {
        if !system.contains_wavelength(*l) {
            return Err(Error::WavelengthMismatch(format!(
                "cube wavelength {l:e} m outside system range"
            )));
        }
    }
    let transmissions: Vec<f64> = match filter {
        SpectralFilter::Identity => vec![1.0; cube.wavelengths().len()],
        SpectralFilter::Samples(f) => {
            if f.len() != cube.wavelengths().len() {
                return Err(Error::WavelengthMismatch(format!(
                    "filter has {} samples for {} cube wavelengths",
                    f.len(),
                    cube.wavelengths().len()
                )));
            }
            if f.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0) {
                return Err(Error::validation("filter samples must lie in [0, 1]"));
            }
            f.clone()
        }
        SpectralFilter::Mask(mask) => {
            effective_spectral_filter(mask, aperture, system, cube.wavelengths())?
        }
        SpectralFilter::IdealMask(mask) => ideal_spectral_filter(mask, system, cube.wavelengths()),
    };

    // PSF kernel grid aligned to the pixel pitch, odd so 0 is a tap
    let taps = (options.kernel_half_width / options.pixel_pitch)
        .round()
        .max(1.0) as usize;
    let kernel_grid = Grid1D::new(
        -(taps as f64) * options.pixel_pitch,
        options.pixel_pitch,
        2 * taps + 1,
    )?;

    let central = 0.5 * (cube.wavelengths()[0] + cube.wavelengths()[cube.wavelengths().len() - 1]);
    let central_kernel = match options.psf_mode {
        PsfMode::CentralWavelength => Some(normalized_taps(&spatial_blur(
            aperture,
            system,
            central,
            kernel_grid,
        )?)),
        PsfMode::PerWavelength => None,
    };

    let weights = wavelength_weights(cube.wavelengths());
    let mut out = vec![0.0; cube.width() * cube.height()];
    for (l, lambda) in cube.wavelengths().iter().enumerate() {
        let gain = weights[l] * transmissions[l];
        if gain == 0.0 {
            continue;
        }
        let taps_owned;
        let taps_ref = match &central_kernel {
            Some(k) => k,
            None => {
                taps_owned =
                    normalized_taps(&spatial_blur(aperture, system, *lambda, kernel_grid)?);
                &taps_owned
            }
        };
        let plane = cube.plane(l);
        for y in 0..cube.height() {
            let row = &plane[y * cube.width()..(y + 1) * cube.width()];
            let out_row = &mut out[y * cube.width()..(y + 1) * cube.width()];
            convolve_row_into(row, taps_ref, gain, out_row);
        }
    }
    Ok(Image2D {
        width: cube.width(),
        height: cube.height(),
        data: out,
    })
}

/// Discrete unit-sum convolution taps from a PSF kernel.
fn normalized_taps(kernel: &SampledKernel) -> Vec<f64> {
    let sum: f64 = kernel.values().iter().sum();
    kernel.values().iter().map(|v| v / sum).collect()
}

fn convolve_row_into(row: &[f64], taps: &[f64], gain: f64, out: &mut [f64]) {
    let center = taps.len() / 2;
    for (x, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, t) in taps.iter().enumerate() {
            let src = x as isize + j as isize - center as isize;
            if src >= 0 && (src as usize) < row.len() {
                acc += t * row[src as usize];
            }
        }
        *o += gain * acc;
    }
}

/// Synthetic scene: two monochromatic point emitters at distinct pixels.
pub fn two_laser_cube(
    width: usize,
    height: usize,
    spot_a: (usize, usize),
    spot_b: (usize, usize),
    lambda_a: f64,
    lambda_b: f64,
) -> Result<HyperspectralCube> {
    if spot_a.0 >= width || spot_b.0 >= width || spot_a.1 >= height || spot_b.1 >= height {
        return Err(Error::validation("laser spots must lie inside the raster"));
    }
    if lambda_a >= lambda_b {
        return Err(Error::validation("laser wavelengths must be ascending"));
    }
    let n = width * height;
    let mut data = vec![0.0; 2 * n];
    data[spot_a.1 * width + spot_a.0] = 1.0;
    data[n + spot_b.1 * width + spot_b.0] = 1.0;
    HyperspectralCube::new(width, height, vec![lambda_a, lambda_b], data)
}

/// Synthetic scene: broadband vertical stripes of the given full period.
pub fn bar_target_cube(
    width: usize,
    height: usize,
    period: usize,
    wavelengths: Vec<f64>,
) -> Result<HyperspectralCube> {
    if period < 2 {
        return Err(Error::validation("bar period must be at least 2 pixels"));
    }
    let n = width * height;
    let mut data = vec![0.0; n * wavelengths.len()];
    for l in 0..wavelengths.len() {
        for y in 0..height {
            for x in 0..width {
                if (x % period) < period / 2 {
                    data[l * n + y * width + x] = 1.0;
                }
            }
        }
    }
    HyperspectralCube::new(width, height, wavelengths, data)
}

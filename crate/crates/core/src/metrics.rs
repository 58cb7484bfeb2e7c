//! Modulation transfer functions and contrast-threshold resolution.
//!
//! The MTF is the peak-normalized magnitude of a kernel's Fourier transform
//! (incoherent-imaging OTF magnitude); "resolution at 30%" is the lowest
//! frequency where contrast first falls to the threshold.

use crate::blur::{self, ApertureFamily, KernelGrids};
use crate::error::{positive, Error, Result};
use crate::kernel::SampledKernel;
use crate::system::OpticalSystem;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Zero-padding factor applied before the FFT so threshold crossings can be
/// interpolated accurately.
const PAD_FACTOR: usize = 8;

/// Contrast against frequency, normalized to 1 at zero frequency.
/// Spatial kernels yield cycles per meter; wavelength kernels cycles per
/// meter-of-wavelength.
#[derive(Debug, Clone)]
pub struct MtfCurve {
    frequencies: Vec<f64>,
    contrast: Vec<f64>,
}

impl MtfCurve {
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn contrast(&self) -> &[f64] {
        &self.contrast
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

/// MTF of a sampled kernel: `|FT(h)(ν)| / |FT(h)(0)|` on the grid's natural
/// frequency axis (padded).
pub fn mtf(kernel: &SampledKernel) -> Result<MtfCurve> {
    let n = kernel.grid().count();
    let step = kernel.grid().step();
    let n_fft = (PAD_FACTOR * n).next_power_of_two();

    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
    for (i, v) in kernel.values().iter().enumerate() {
        buf[i] = Complex64::new(v * crate::grid::trapezoid_weight(i, n), 0.0);
    }
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);

    let zero = buf[0].norm();
    if !positive(zero) {
        return Err(Error::ZeroMass);
    }
    let half = n_fft / 2;
    let frequencies = (0..=half)
        .map(|k| k as f64 / (n_fft as f64 * step))
        .collect();
    let contrast = buf[..=half].iter().map(|c| c.norm() / zero).collect();
    Ok(MtfCurve {
        frequencies,
        contrast,
    })
}

/// Lowest frequency where contrast first falls to `threshold`, linearly
/// interpolated between grid points. `threshold` must lie strictly inside
/// (0, 1); contrast starts at exactly 1 by normalization.
pub fn resolution_at_contrast(curve: &MtfCurve, threshold: f64) -> Result<f64> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::validation(
            "contrast threshold must lie strictly between 0 and 1",
        ));
    }
    for k in 1..curve.contrast.len() {
        let (c0, c1) = (curve.contrast[k - 1], curve.contrast[k]);
        if c1 <= threshold {
            let t = (c0 - threshold) / (c0 - c1);
            return Ok(
                curve.frequencies[k - 1] + t * (curve.frequencies[k] - curve.frequencies[k - 1])
            );
        }
    }
    Err(Error::NoCrossing {
        threshold,
        max_frequency: *curve.frequencies.last().unwrap_or(&0.0),
        min_contrast: curve.contrast.iter().cloned().fold(f64::INFINITY, f64::min),
    })
}

/// One row of an MTF-threshold sweep.
#[derive(Debug, Clone, Copy)]
pub struct MtfSweepRow {
    pub width: f64,
    pub spectral_resolution: f64,
    pub spatial_resolution: f64,
}

/// Threshold-resolution counterpart of [`blur::tradeoff_sweep`]: both kernels
/// per width, resolution read off each MTF at `threshold`.
pub fn mtf_tradeoff_sweep(
    family: ApertureFamily,
    widths: &[f64],
    system: &OpticalSystem,
    wavelength: f64,
    threshold: f64,
    sensor_half_width: f64,
) -> Result<Vec<MtfSweepRow>> {
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
            let pair = blur::blur_pair(&aperture, system, wavelength, &grids)?;
            Ok(MtfSweepRow {
                width,
                spectral_resolution: resolution_at_contrast(&mtf(&pair.spectral)?, threshold)?,
                spatial_resolution: resolution_at_contrast(&mtf(&pair.spatial)?, threshold)?,
            })
        })
        .collect()
}

/// CSV serialization of an MTF sweep table.
pub fn mtf_sweep_to_csv(rows: &[MtfSweepRow], threshold: f64) -> String {
    let mut out = String::from("width_m,spectral_res_cyc_per_m,spatial_res_cyc_per_m,threshold\n");
    for row in rows {
        out.push_str(&format!(
            "{:e},{:e},{:e},{}\n",
            row.width, row.spectral_resolution, row.spatial_resolution, threshold
        ));
    }
    out
}

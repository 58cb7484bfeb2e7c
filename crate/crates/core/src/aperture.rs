//! Pupil-code amplitude profiles `a(x)` and their Fourier power spectra
//! `|A(u)|²`.
//!
//! The illumination model is spatially incoherent, so pupil phase is
//! irrelevant and every profile is a real nonnegative amplitude. The Fourier
//! convention is fixed as `A(u) = ∫ a(x)·exp(-2πi·u·x) dx` (ordinary
//! frequency); the absolute normalization of `|A|²` cancels in every
//! downstream ratio but is kept stable so golden outputs do not drift.

use crate::error::{positive, Error, Result};
use crate::grid::Grid1D;

/// Default full width of the "open" aperture. A truly unbounded profile has
/// undefined moments; the physical lens pupil is finite.
pub const DEFAULT_OPEN_WIDTH: f64 = 10e-3;

/// `sin(πz)/(πz)` with the removable singularity filled in.
pub fn sinc(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        let pz = core::f64::consts::PI * z;
        pz.sin() / pz
    }
}

/// A 1-D pupil-code amplitude profile. The dispersion axis `x` carries the
/// whole analysis; there is no spectral dispersion along `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum ApertureProfile {
    /// `a(x) = exp(-x²/2σ²)`; saturates the space-spectrum bound.
    Gaussian { sigma: f64 },
    /// `a(x) = 1` for `|x| ≤ W/2`, else 0.
    Slit { width: f64 },
    /// Wide slit standing in for an unobstructed pupil.
    Open { max_width: f64 },
    /// Arbitrary sampled amplitudes; linear interpolation inside the grid,
    /// opaque (zero) outside.
    Sampled { grid: Grid1D, amplitude: Vec<f64> },
}

impl ApertureProfile {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !positive(sigma) {
            return Err(Error::validation("gaussian sigma must be positive"));
        }
        Ok(ApertureProfile::Gaussian { sigma })
    }

    pub fn slit(width: f64) -> Result<Self> {
        if !positive(width) {
            return Err(Error::validation("slit width must be positive"));
        }
        Ok(ApertureProfile::Slit { width })
    }

    pub fn open() -> Self {
        ApertureProfile::Open {
            max_width: DEFAULT_OPEN_WIDTH,
        }
    }

    pub fn open_with_width(max_width: f64) -> Result<Self> {
        if !positive(max_width) {
            return Err(Error::validation("open max_width must be positive"));
        }
        Ok(ApertureProfile::Open { max_width })
    }

    pub fn sampled(grid: Grid1D, amplitude: Vec<f64>) -> Result<Self> {
        if amplitude.len() != grid.count() {
            return Err(Error::validation(
                "sampled amplitude length must match grid count",
            ));
        }
        if amplitude.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::validation(
                "sampled amplitudes must be finite and nonnegative",
            ));
        }
        if !amplitude.iter().any(|a| *a > 0.0) {
            return Err(Error::validation(
                "sampled aperture needs at least one nonzero amplitude",
            ));
        }
        Ok(ApertureProfile::Sampled { grid, amplitude })
    }

    /// Amplitude transmission at `x`. Total on finite inputs.
    pub fn evaluate(&self, x: f64) -> f64 {
        match self {
            ApertureProfile::Gaussian { sigma } => (-x * x / (2.0 * sigma * sigma)).exp(),
            ApertureProfile::Slit { width } | ApertureProfile::Open { max_width: width } => {
                if x.abs() <= 0.5 * width {
                    1.0
                } else {
                    0.0
                }
            }
            ApertureProfile::Sampled { grid, amplitude } => grid.interpolate(amplitude, x),
        }
    }

    /// Fourier power spectrum `|A(u)|²` under the crate's convention.
    ///
    /// Closed forms for the analytic kinds; the sampled kind evaluates the
    /// exact transform of its linear interpolant, which is the discrete sum
    /// rolled off by `sinc²(step·u)`. Built on `|u|` so evenness is exact.
    pub fn fourier_psd(&self, u: f64) -> f64 {
        let ua = u.abs();
        match self {
            ApertureProfile::Gaussian { sigma } => {
                let two_pi_sigma = 2.0 * core::f64::consts::PI * sigma;
                core::f64::consts::TAU
                    * sigma
                    * sigma
                    * (-(two_pi_sigma * ua) * (two_pi_sigma * ua)).exp()
            }
            ApertureProfile::Slit { width } | ApertureProfile::Open { max_width: width } => {
                let s = sinc(width * ua);
                width * width * s * s
            }
            ApertureProfile::Sampled { grid, amplitude } => {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for (i, a) in amplitude.iter().enumerate() {
                    let phase = -core::f64::consts::TAU * ua * grid.coordinate(i);
                    re += a * phase.cos();
                    im += a * phase.sin();
                }
                let hat = grid.step() * sinc(grid.step() * ua) * sinc(grid.step() * ua);
                hat * hat * (re * re + im * im)
            }
        }
    }

    /// Coordinate compression `a(x) → a(s·x)`, `s > 0`.
    pub fn scale(&self, s: f64) -> Result<Self> {
        if !positive(s) {
            return Err(Error::validation("scale factor must be positive"));
        }
        Ok(match self {
            ApertureProfile::Gaussian { sigma } => ApertureProfile::Gaussian { sigma: sigma / s },
            ApertureProfile::Slit { width } => ApertureProfile::Slit { width: width / s },
            ApertureProfile::Open { max_width } => ApertureProfile::Open {
                max_width: max_width / s,
            },
            ApertureProfile::Sampled { grid, amplitude } => ApertureProfile::Sampled {
                grid: Grid1D::new(grid.start() / s, grid.step() / s, grid.count())?,
                amplitude: amplitude.clone(),
            },
        })
    }

    /// Characteristic feature size: σ for the gaussian, the full width for
    /// slit-like kinds, the grid extent for sampled profiles. Grid policies
    /// key off this (≥ 16 samples per feature and so on).
    pub fn feature_scale(&self) -> f64 {
        match self {
            ApertureProfile::Gaussian { sigma } => *sigma,
            ApertureProfile::Slit { width } => *width,
            ApertureProfile::Open { max_width } => *max_width,
            ApertureProfile::Sampled { grid, .. } => grid.extent(),
        }
    }

    /// Half-width that contains the profile for containment checks: 4σ for
    /// the gaussian (the 8σ-extent rule), the half width for slit kinds.
    pub fn footprint_half_width(&self) -> f64 {
        match self {
            ApertureProfile::Gaussian { sigma } => 4.0 * sigma,
            ApertureProfile::Slit { width } => 0.5 * width,
            ApertureProfile::Open { max_width } => 0.5 * max_width,
            ApertureProfile::Sampled { grid, .. } => {
                grid.start().abs().max(grid.end().abs()) + grid.step()
            }
        }
    }
}

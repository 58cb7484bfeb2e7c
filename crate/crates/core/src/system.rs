//! Optical-system configuration: focal length, grating groove density and the
//! usable wavelength band. All downstream scalings derive from `f·ν0`.

use crate::error::{positive, Error, Result};

/// Immutable configuration of the 4f relay + grating system.
///
/// Only the first diffraction order propagates; the grating order is a fixed
/// constant of the design, not a parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalSystem {
    focal_length: f64,
    groove_density: f64,
    wavelength_min: f64,
    wavelength_max: f64,
}

/// The single diffraction order the design keeps.
pub const GRATING_ORDER: u32 = 1;

impl OpticalSystem {
    /// Validates and builds a system. Lengths in meters, groove density in
    /// lines per meter.
    pub fn new(
        focal_length: f64,
        groove_density: f64,
        wavelength_min: f64,
        wavelength_max: f64,
    ) -> Result<Self> {
        if !positive(focal_length) {
            return Err(Error::validation("focal_length must be positive"));
        }
        if !positive(groove_density) {
            return Err(Error::validation("groove_density must be positive"));
        }
        if !positive(wavelength_min) {
            return Err(Error::validation("wavelength_min must be positive"));
        }
        if !wavelength_max.is_finite() || wavelength_max <= wavelength_min {
            return Err(Error::validation(
                "wavelength_max must exceed wavelength_min",
            ));
        }
        Ok(OpticalSystem {
            focal_length,
            groove_density,
            wavelength_min,
            wavelength_max,
        })
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }

    pub fn groove_density(&self) -> f64 {
        self.groove_density
    }

    pub fn wavelength_min(&self) -> f64 {
        self.wavelength_min
    }

    pub fn wavelength_max(&self) -> f64 {
        self.wavelength_max
    }

    /// The dimensionless dispersion scale `f·ν0` that maps wavelength to
    /// rainbow-plane position.
    pub fn f_nu0(&self) -> f64 {
        self.focal_length * self.groove_density
    }

    /// First-order rainbow-plane position of wavelength `λ`: `λ·f·ν0`.
    pub fn rainbow_position(&self, wavelength: f64) -> f64 {
        wavelength * self.f_nu0()
    }

    pub fn contains_wavelength(&self, wavelength: f64) -> bool {
        wavelength >= self.wavelength_min && wavelength <= self.wavelength_max
    }

    /// Lower bound on the space-spectrum bandwidth product at `λ`:
    /// `λ / (4π·ν0)` square meters. Independent of focal length.
    pub fn uncertainty_bound(&self, wavelength: f64) -> Result<f64> {
        if !positive(wavelength) {
            return Err(Error::validation("wavelength must be positive"));
        }
        Ok(wavelength / (4.0 * core::f64::consts::PI * self.groove_density))
    }

    /// Wavelength-independent conservative bound, evaluated at the bottom of
    /// the band: `λ_min / (4π·ν0)`.
    pub fn uncertainty_bound_min(&self) -> f64 {
        self.wavelength_min / (4.0 * core::f64::consts::PI * self.groove_density)
    }
}

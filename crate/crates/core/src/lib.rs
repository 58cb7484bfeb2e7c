//! Numerical model of a 4f spectrally-programmable camera: a pupil code in the
//! Fourier plane (P2), a diffraction grating on the relayed image plane (P3), a
//! "rainbow plane" (P4) where the spectrum is spatially laid out at `x = λ·f·ν0`,
//! and a final image plane (P5).
//!
//! The library computes the spectral and spatial blur kernels induced by the
//! pupil code, their second-moment standard deviations, and the space-spectrum
//! bandwidth product `σ_x·σ_λ`, which is bounded below by `λ/(4π·ν0)`. Gaussian
//! pupil codes saturate the bound; every other shape sits above it.
//!
//! Modules:
//! - [`system`]: optical configuration (focal length, groove density, band).
//! - [`grid`] / [`kernel`]: uniform 1-D grids and nonnegative sampled kernels.
//! - [`aperture`]: pupil-code profiles and their Fourier power spectra.
//! - [`blur`]: closed-form blur kernels, uncertainty reports, tradeoff sweeps.
//! - [`propagation`]: plane-by-plane FFT propagation oracle (P1..P5) used to
//!   validate the closed forms independently.
//! - [`filtering`]: rainbow-plane masks, narrowband-filter PSF analysis and
//!   scene-level spectral filtering of hyperspectral cubes.
//! - [`metrics`]: MTF curves and contrast-threshold resolution.
//!
//! All lengths are SI meters; interface layers own unit suffixes.

pub mod aperture;
pub mod blur;
pub mod error;
pub mod filtering;
pub mod grid;
pub mod kernel;
pub mod metrics;
pub mod propagation;
pub mod system;
pub mod units;

pub use aperture::ApertureProfile;
pub use blur::{
    tradeoff_sweep, uncertainty_product, ApertureFamily, BlurPair, KernelGrids, SweepRow,
    UncertaintyReport,
};
pub use error::{Error, Result};
pub use grid::Grid1D;
pub use kernel::{AxisKind, SampledKernel};
pub use metrics::MtfCurve;
pub use system::OpticalSystem;

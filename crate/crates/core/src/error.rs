use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or operation precondition failed. The message names the
    /// offending field, e.g. `"focal_length must be positive"`.
    #[error("{0}")]
    Validation(String),

    /// A kernel grid truncates more analytic mass than the sampling policy
    /// allows (99.99% capture for analytic shapes with finite support/moments).
    #[error("grid captures only {captured:.6} of the kernel mass (required {required})")]
    Truncation { captured: f64, required: f64 },

    /// A kernel with zero total mass reached a moment or MTF computation.
    #[error("kernel has zero total mass")]
    ZeroMass,

    /// Masked rainbow-plane profile is identically zero; the PSF is undefined.
    #[error("masked profile is identically zero: fully blocked")]
    FullyBlocked,

    /// An MTF curve never falls to the requested contrast on its grid.
    #[error(
        "contrast never reaches {threshold} (minimum {min_contrast:.6} at {max_frequency:.6e} cycles/m)"
    )]
    NoCrossing {
        threshold: f64,
        max_frequency: f64,
        min_contrast: f64,
    },

    /// A spectral axis disagrees with the axis it must be sampled on.
    #[error("wavelength axis mismatch: {0}")]
    WavelengthMismatch(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = core::result::Result<T, Error>;

/// Finite and strictly positive — the validation every physical scale needs.
pub(crate) fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

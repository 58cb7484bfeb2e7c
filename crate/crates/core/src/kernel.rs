//! Nonnegative sampled blur kernels and their raw second moments.

use crate::error::{positive, Error, Result};
use crate::grid::{trapezoid_integral, Grid1D};

/// Physical axis a kernel lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Space,
    Wavelength,
}

/// A nonnegative density sampled on a uniform grid. Kernels are constructed
/// centered on 0 and treated as relative blurs; absolute plane geometry lives
/// with the propagation and filtering modules.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledKernel {
    grid: Grid1D,
    values: Vec<f64>,
    axis: AxisKind,
}

impl SampledKernel {
    pub fn new(grid: Grid1D, values: Vec<f64>, axis: AxisKind) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::validation(
                "kernel values length must match grid count",
            ));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::validation(
                "kernel values must be finite and nonnegative",
            ));
        }
        if !values.iter().any(|v| *v > 0.0) {
            return Err(Error::ZeroMass);
        }
        let kernel = SampledKernel { grid, values, axis };
        if !positive(kernel.total_mass()) {
            return Err(Error::ZeroMass);
        }
        Ok(kernel)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn axis(&self) -> AxisKind {
        self.axis
    }

    /// Trapezoidal integral of the kernel over its grid.
    pub fn total_mass(&self) -> f64 {
        trapezoid_integral(&self.values, self.grid.step())
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Raw second-moment standard deviation about coordinate 0:
    /// `sqrt(∫ t²·h(t) dt / ∫ h(t) dt)` by the trapezoidal rule.
    /// No mean subtraction; kernels are constructed centered.
    pub fn std_dev(&self) -> Result<f64> {
        let mass = self.total_mass();
        if !positive(mass) {
            return Err(Error::ZeroMass);
        }
        let weighted: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = self.grid.coordinate(i);
                x * x * v
            })
            .collect();
        let second = trapezoid_integral(&weighted, self.grid.step());
        Ok((second / mass).sqrt())
    }

    /// Values divided by the peak (peak becomes exactly 1).
    pub fn peak_normalized(&self) -> Vec<f64> {
        let p = self.peak();
        self.values.iter().map(|v| v / p).collect()
    }

    /// Linear interpolation of the kernel at `x`; zero outside the grid.
    pub fn sample_at(&self, x: f64) -> f64 {
        self.grid.interpolate(&self.values, x)
    }
}

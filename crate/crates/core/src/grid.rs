//! Uniform 1-D sampling grids with exactly reproducible coordinates.

use crate::error::{positive, Error, Result};

/// A uniform grid `x_i = start + i·step`, `i = 0..count`.
///
/// Coordinates are recomputed from `(start, step)` on every access, so the
/// same index always yields the bit-identical value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() {
            return Err(Error::validation("grid start must be finite"));
        }
        if !positive(step) {
            return Err(Error::validation("grid step must be positive"));
        }
        if count < 2 {
            return Err(Error::validation("grid count must be at least 2"));
        }
        Ok(Grid1D { start, step, count })
    }

    /// Grid spanning `[-half_width, +half_width]`. An odd `count` puts a
    /// sample exactly at 0.
    pub fn centered(half_width: f64, count: usize) -> Result<Self> {
        if !positive(half_width) {
            return Err(Error::validation("grid half_width must be positive"));
        }
        if count < 2 {
            return Err(Error::validation("grid count must be at least 2"));
        }
        let step = 2.0 * half_width / (count - 1) as f64;
        Grid1D::new(-half_width, step, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.coordinate(self.count - 1)
    }

    pub fn extent(&self) -> f64 {
        self.end() - self.start
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.coordinate(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start && x <= self.end()
    }

    /// Index of the sample nearest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let i = ((x - self.start) / self.step).round();
        if i <= 0.0 {
            0
        } else {
            (i as usize).min(self.count - 1)
        }
    }

    /// Linear interpolation of `values` (sampled on this grid) at `x`;
    /// zero outside the grid.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        debug_assert_eq!(values.len(), self.count);
        if !self.contains(x) {
            return 0.0;
        }
        let t = (x - self.start) / self.step;
        let i = (t.floor() as usize).min(self.count - 2);
        let frac = t - i as f64;
        values[i] * (1.0 - frac) + values[i + 1] * frac
    }
}

/// Trapezoidal integral of uniformly sampled values.
pub fn trapezoid_integral(values: &[f64], step: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let sum: f64 = values.iter().sum();
    step * (sum - 0.5 * (values[0] + values[values.len() - 1]))
}

/// Trapezoidal quadrature weight for sample `i` of `count` (1/2 at the ends).
pub fn trapezoid_weight(i: usize, count: usize) -> f64 {
    if i == 0 || i + 1 == count {
        0.5
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid1D::new(0.0, 0.0, 4).is_err());
        assert!(Grid1D::new(0.0, -1.0, 4).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::new(f64::NAN, 1.0, 4).is_err());
    }

    #[test]
    fn centered_odd_count_hits_zero() {
        let g = Grid1D::centered(1e-3, 4097).unwrap();
        assert_eq!(g.coordinate(2048), 0.0);
        assert_eq!(g.start(), -1e-3);
        assert_eq!(g.end(), 1e-3);
    }

    #[test]
    fn trapezoid_matches_linear_ramp() {
        // exact for piecewise-linear integrands
        let vals: Vec<f64> = (0..11).map(|i| i as f64).collect();
        assert!((trapezoid_integral(&vals, 0.5) - 25.0).abs() < 1e-12);
    }

    #[test]
    fn interpolate_is_zero_outside() {
        let g = Grid1D::new(0.0, 1.0, 3).unwrap();
        let v = [1.0, 2.0, 3.0];
        assert_eq!(g.interpolate(&v, -0.1), 0.0);
        assert_eq!(g.interpolate(&v, 2.1), 0.0);
        assert!((g.interpolate(&v, 0.5) - 1.5).abs() < 1e-12);
        assert_eq!(g.interpolate(&v, 2.0), 3.0);
    }

    proptest! {
        #[test]
        fn coordinates_are_reproducible(
            start in -1e-2..1e-2f64,
            step in 1e-9..1e-3f64,
            count in 2usize..5000,
            idx in 0usize..5000,
        ) {
            let g = Grid1D::new(start, step, count).unwrap();
            let i = idx % count;
            prop_assert_eq!(g.coordinate(i).to_bits(), g.coordinate(i).to_bits());
            // reconstruction from a fresh identical grid is bit-equal
            let g2 = Grid1D::new(start, step, count).unwrap();
            prop_assert_eq!(g.coordinate(i).to_bits(), g2.coordinate(i).to_bits());
        }

        #[test]
        fn nearest_index_roundtrips(count in 3usize..500, idx in 0usize..500) {
            let g = Grid1D::new(-1.0, 1e-2, count).unwrap();
            let i = idx % count;
            prop_assert_eq!(g.nearest_index(g.coordinate(i)), i);
        }
    }
}

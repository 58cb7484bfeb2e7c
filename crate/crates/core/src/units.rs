//! Length scale constants. Everything internal is meters; these exist so test
//! and application code reads like the bench notes it came from.

pub const METER: f64 = 1.0;
pub const MILLIMETER: f64 = 1e-3;
pub const MICROMETER: f64 = 1e-6;
pub const NANOMETER: f64 = 1e-9;

/// Lines per meter for a groove density given in lines per millimeter.
pub const PER_MILLIMETER: f64 = 1e3;

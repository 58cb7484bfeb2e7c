//! Plane-by-plane propagation oracle for the 4f chain P1 → P5.
//!
//! Each 2f lens hop is a scaled Fourier transform. The discrete transform is
//! kept unitary (`Σ|v|²` conserved exactly) and the physical prefactor
//! `1/(jλf)` together with the `step·√N` quadrature factor is recorded
//! separately on the slice, so energy bookkeeping and agreement tests can use
//! whichever convention they state.
//!
//! The grating is a linear phase ramp `exp(+2πi·ν0·x)` on P3 — the first
//! diffraction order of the impulse-train model; the following lens turns it
//! into the rainbow-plane shift `x → x − λ·f·ν0`. The odd-plane step is
//! chosen so the ramp lands on an integer transform bin, which makes the
//! shift an exact circular shift instead of an interpolation and keeps
//! hard-edged pupils ringing-free.
//!
//! Spectral lines add in intensity only (spatially incoherent model), in
//! fixed order.

use crate::aperture::ApertureProfile;
use crate::error::{positive, Error, Result};
use crate::grid::Grid1D;
use crate::system::OpticalSystem;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// The five planes of the relay. P2 holds the pupil code, P3 the grating,
/// P4 the rainbow plane, P5 the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    P1,
    P2,
    P3,
    P4,
    P5,
}

impl Plane {
    pub fn next(self) -> Option<Plane> {
        match self {
            Plane::P1 => Some(Plane::P2),
            Plane::P2 => Some(Plane::P3),
            Plane::P3 => Some(Plane::P4),
            Plane::P4 => Some(Plane::P5),
            Plane::P5 => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Plane::P1 => "P1",
            Plane::P2 => "P2",
            Plane::P3 => "P3",
            Plane::P4 => "P4",
            Plane::P5 => "P5",
        }
    }
}

/// Complex field sampled on one plane for one wavelength.
#[derive(Debug, Clone)]
pub struct FieldSlice {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
    pub wavelength: f64,
    pub plane: Plane,
    /// Accumulated physical prefactor (`Π step·√N / (jλf)`); `values` stay in
    /// the unitary discrete convention.
    pub scale: Complex64,
}

impl FieldSlice {
    pub fn new(
        grid: Grid1D,
        values: Vec<Complex64>,
        wavelength: f64,
        plane: Plane,
    ) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::validation("field length must match grid count"));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::validation("field values must be finite"));
        }
        if !positive(wavelength) {
            return Err(Error::validation("wavelength must be positive"));
        }
        Ok(FieldSlice {
            grid,
            values,
            wavelength,
            plane,
            scale: Complex64::new(1.0, 0.0),
        })
    }

    /// `Σ|v|²` — conserved exactly by every lens hop.
    pub fn sum_squared_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `Σ|v|²·step` — comparable between same-parity planes (P1/P3/P5 share a
    /// step, as do P2/P4).
    pub fn power(&self) -> f64 {
        self.sum_squared_magnitude() * self.grid.step()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }
}

/// A point emitter on P1 with a line spectrum.
#[derive(Debug, Clone)]
pub struct PointSource {
    pub position: f64,
    pub lines: Vec<SpectralLine>,
}

#[derive(Debug, Clone, Copy)]
pub struct SpectralLine {
    pub wavelength: f64,
    pub intensity: f64,
}

impl PointSource {
    pub fn new(position: f64, lines: Vec<SpectralLine>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::validation("point source needs at least one line"));
        }
        if lines
            .iter()
            .any(|l| !positive(l.wavelength) || !l.intensity.is_finite() || l.intensity < 0.0)
        {
            return Err(Error::validation(
                "spectral lines need positive wavelengths and nonnegative intensities",
            ));
        }
        if !lines.iter().any(|l| l.intensity > 0.0) {
            return Err(Error::validation(
                "point source needs at least one line with positive intensity",
            ));
        }
        Ok(PointSource { position, lines })
    }

    pub fn monochromatic(position: f64, wavelength: f64) -> Result<Self> {
        PointSource::new(
            position,
            vec![SpectralLine {
                wavelength,
                intensity: 1.0,
            }],
        )
    }
}

/// Camera intensity readout on P4 or P5.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub grid: Grid1D,
    pub intensity: Vec<f64>,
    pub plane: Plane,
    /// Camera response actually applied, one value per source line.
    pub camera_response: Vec<f64>,
}

impl Measurement {
    /// Position of the intensity maximum; for plateaued profiles (a slit's
    /// flat top) the midpoint of the plateau. The plateau tolerance sits well
    /// above FFT roundoff and well below any physical structure.
    pub fn peak_position(&self) -> f64 {
        let max = self.intensity.iter().cloned().fold(0.0, f64::max);
        let tol = max * (1.0 - 1e-9);
        let first = self.intensity.iter().position(|v| *v >= tol).unwrap_or(0);
        let last = self.intensity.iter().rposition(|v| *v >= tol).unwrap_or(0);
        0.5 * (self.grid.coordinate(first) + self.grid.coordinate(last))
    }

    pub fn total(&self) -> f64 {
        crate::grid::trapezoid_integral(&self.intensity, self.grid.step())
    }
}

/// Default transform size; a power of two keeps the FFT fast.
pub const DEFAULT_GRID_SIZE: usize = 16384;

/// Sampling plan shared by all five planes. P1/P3/P5 share one step; P2/P4
/// steps scale with λ through the lens transform.
#[derive(Debug, Clone, Copy)]
pub struct PropagationGrids {
    n: usize,
    odd_step: f64,
    system: OpticalSystem,
}

impl PropagationGrids {
    pub fn for_system(system: &OpticalSystem, aperture: &ApertureProfile) -> Result<Self> {
        Self::with_size(system, aperture, DEFAULT_GRID_SIZE)
    }

    pub fn with_size(system: &OpticalSystem, aperture: &ApertureProfile, n: usize) -> Result<Self> {
        if n < 256 || !n.is_multiple_of(2) {
            return Err(Error::validation(
                "propagation grid size must be even and at least 256",
            ));
        }
        // Snap the odd-plane step so the grating ramp is an integer transform
        // bin, ν0·step·n = m: the rainbow shift becomes an exact circular
        // shift and hard-edged pupils arrive on P4 ringing-free. m is capped
        // at 0.4·n (ramp comfortably below Nyquist) and lowered further until
        // the shift plus the pupil footprint fits the even-plane half extent
        // r·n/(2m) with a 25% margin at the bottom of the band.
        let rainbow_min = system.rainbow_position(system.wavelength_min());
        let footprint = aperture.footprint_half_width();
        let m_margin = rainbow_min * n as f64 / (2.5 * (rainbow_min + footprint));
        let m = (0.4 * n as f64).min(m_margin).floor();
        if m < 2.0 {
            return Err(Error::validation(
                "pupil footprint too large for the first-order geometry; increase the grid size",
            ));
        }
        let odd_step = m / (system.groove_density() * n as f64);
        let grids = PropagationGrids {
            n,
            odd_step,
            system: *system,
        };

        let feature = aperture.feature_scale();
        if grids.even_step(system.wavelength_max()) > feature / 16.0 {
            return Err(Error::validation(
                "pupil-plane sampling too coarse for this aperture; increase the grid size",
            ));
        }
        debug_assert!(grids.even_half_extent(system.wavelength_min()) >= rainbow_min + footprint);
        Ok(grids)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn system(&self) -> &OpticalSystem {
        &self.system
    }

    pub fn odd_step(&self) -> f64 {
        self.odd_step
    }

    pub fn even_step(&self, wavelength: f64) -> f64 {
        wavelength * self.system.focal_length() / (self.n as f64 * self.odd_step)
    }

    fn even_half_extent(&self, wavelength: f64) -> f64 {
        0.5 * self.n as f64 * self.even_step(wavelength)
    }

    /// Grid for P1, P3 and P5.
    pub fn odd_grid(&self) -> Grid1D {
        let half = (self.n / 2) as f64 * self.odd_step;
        Grid1D::new(-half, self.odd_step, self.n).expect("validated step")
    }

    /// Grid for P2 and P4 at wavelength `λ`.
    pub fn even_grid(&self, wavelength: f64) -> Grid1D {
        let step = self.even_step(wavelength);
        let half = (self.n / 2) as f64 * step;
        Grid1D::new(-half, step, self.n).expect("validated step")
    }

    /// Transform bin the grating ramp lands on (integer by construction).
    pub fn ramp_bin(&self) -> f64 {
        self.system.groove_density() * self.odd_step * self.n as f64
    }

    /// Discrete point emitter on P1 normalized so `power() == intensity`.
    pub fn point_source_slice(&self, position: f64, line: SpectralLine) -> Result<FieldSlice> {
        let grid = self.odd_grid();
        if !grid.contains(position) {
            return Err(Error::validation("source position outside the P1 grid"));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); self.n];
        values[grid.nearest_index(position)] =
            Complex64::new((line.intensity / self.odd_step).sqrt(), 0.0);
        FieldSlice::new(grid, values, line.wavelength, Plane::P1)
    }
}

/// Unitary centered DFT: `Y_k = N^{-1/2}·Σ_n x_n·exp(-2πi(k-N/2)(n-N/2)/N)`.
/// Exact for any even N (the two half rotations cancel the residual phases).
fn centered_dft(values: &mut [Complex64]) {
    let n = values.len();
    debug_assert!(n.is_multiple_of(2));
    values.rotate_left(n / 2);
    FftPlanner::new().plan_fft_forward(n).process(values);
    values.rotate_left(n / 2);
    let norm = 1.0 / (n as f64).sqrt();
    for v in values.iter_mut() {
        *v *= norm;
    }
}

/// One 2f lens hop: scaled Fourier transform onto the next plane.
///
/// Output coordinates are `x' = λf·u`; the discrete part is unitary and the
/// physical factor `step·√N/(jλf)` accumulates on `scale`. Applying it twice
/// flips the coordinates and multiplies `scale` by `-1/(λf)` (1-D chain).
pub fn lens_ft(field: &FieldSlice, focal_length: f64) -> Result<FieldSlice> {
    let plane = field
        .plane
        .next()
        .ok_or_else(|| Error::validation("no plane follows P5"))?;
    let n = field.grid.count();
    if !n.is_multiple_of(2) {
        return Err(Error::validation(
            "lens transform needs an even sample count",
        ));
    }
    let centered = field.grid.start() + (n / 2) as f64 * field.grid.step();
    if centered.abs() > 1e-6 * field.grid.step() {
        return Err(Error::validation(
            "lens transform needs a grid centered on 0",
        ));
    }

    let mut values = field.values.clone();
    centered_dft(&mut values);

    let lambda_f = field.wavelength * focal_length;
    let step_out = lambda_f / (n as f64 * field.grid.step());
    let start = -((n / 2) as f64) * step_out;
    let grid = Grid1D::new(start, step_out, n)?;
    // 1/(jλf) = -j/(λf)
    let scale =
        field.scale * Complex64::new(0.0, -1.0 / lambda_f) * field.grid.step() * (n as f64).sqrt();
    Ok(FieldSlice {
        grid,
        values,
        wavelength: field.wavelength,
        plane,
        scale,
    })
}

/// Pointwise pupil-code transmission on P2.
pub fn apply_pupil(field: &FieldSlice, aperture: &ApertureProfile) -> Result<FieldSlice> {
    if field.plane != Plane::P2 {
        return Err(Error::validation("pupil code applies on plane P2"));
    }
    if let ApertureProfile::Slit { width } | ApertureProfile::Open { max_width: width } = aperture {
        if *width < field.grid.step() {
            log::warn!(
                "slit width {width:e} m is narrower than the pupil-plane step {:e} m; the field collapses to a single column",
                field.grid.step()
            );
        }
    }
    let mut out = field.clone();
    for (i, v) in out.values.iter_mut().enumerate() {
        *v *= aperture.evaluate(field.grid.coordinate(i));
    }
    Ok(out)
}

/// First-order grating action on P3: the phase ramp `exp(+2πi·ν0·x)`, which
/// the next lens turns into the `λ·f·ν0` rainbow-plane shift.
pub fn apply_grating_first_order(field: &FieldSlice, system: &OpticalSystem) -> Result<FieldSlice> {
    if field.plane != Plane::P3 {
        return Err(Error::validation("the grating sits on plane P3"));
    }
    let nu0 = system.groove_density();
    let mut out = field.clone();
    for (i, v) in out.values.iter_mut().enumerate() {
        let phase = core::f64::consts::TAU * nu0 * field.grid.coordinate(i);
        *v *= Complex64::new(phase.cos(), phase.sin());
    }
    Ok(out)
}

/// Propagates a single line from the P1 point emitter up to `target`,
/// applying the pupil on P2 and the grating on P3 along the way.
pub fn propagate_line(
    grids: &PropagationGrids,
    aperture: &ApertureProfile,
    position: f64,
    line: SpectralLine,
    target: Plane,
) -> Result<FieldSlice> {
    let planes = propagate_planes(grids, aperture, position, line, target)?;
    Ok(planes.into_iter().last().expect("at least P1"))
}

/// Same as [`propagate_line`] but keeps every intermediate plane (post-pupil
/// on P2, post-grating on P3).
pub fn propagate_planes(
    grids: &PropagationGrids,
    aperture: &ApertureProfile,
    position: f64,
    line: SpectralLine,
    target: Plane,
) -> Result<Vec<FieldSlice>> {
    let system = grids.system;
    let mut slices = vec![grids.point_source_slice(position, line)?];
    loop {
        let current = slices.last().expect("non-empty");
        if current.plane == target {
            return Ok(slices);
        }
        let mut next = lens_ft(current, system.focal_length())?;
        next = match next.plane {
            Plane::P2 => apply_pupil(&next, aperture)?,
            Plane::P3 => apply_grating_first_order(&next, &system)?,
            _ => next,
        };
        slices.push(next);
    }
}

/// Camera readout on P4 or P5: per line, propagate, square, weight by the
/// camera response and the `1/(λf)²` radiometric factor, resample onto the
/// output grid and sum incoherently in fixed line order.
///
/// `output_grid` defaults to the plane's natural grid (for P4, the grid of
/// the first line's wavelength).
pub fn measure(
    source: &PointSource,
    aperture: &ApertureProfile,
    grids: &PropagationGrids,
    plane: Plane,
    camera_response: Option<&[f64]>,
    output_grid: Option<Grid1D>,
) -> Result<Measurement> {
    if plane != Plane::P4 && plane != Plane::P5 {
        return Err(Error::validation("cameras sit on plane P4 or P5"));
    }
    let system = grids.system;
    for line in &source.lines {
        if !system.contains_wavelength(line.wavelength) {
            return Err(Error::validation(format!(
                "source line {:e} m outside system range",
                line.wavelength
            )));
        }
    }
    let response: Vec<f64> = match camera_response {
        Some(c) => {
            if c.len() != source.lines.len() {
                return Err(Error::validation(
                    "camera response must be sampled on the source's lines",
                ));
            }
            c.to_vec()
        }
        None => vec![1.0; source.lines.len()],
    };

    let grid = output_grid.unwrap_or(match plane {
        Plane::P5 => grids.odd_grid(),
        _ => grids.even_grid(source.lines[0].wavelength),
    });

    let mut intensity = vec![0.0; grid.count()];
    for (line, c) in source.lines.iter().zip(&response) {
        let slice = propagate_line(grids, aperture, source.position, *line, plane)?;
        let lf = line.wavelength * system.focal_length();
        let weight = c / (lf * lf);
        let line_intensity: Vec<f64> = slice.values.iter().map(|v| v.norm_sqr() * weight).collect();
        if slice.grid == grid {
            for (acc, v) in intensity.iter_mut().zip(&line_intensity) {
                *acc += v;
            }
        } else {
            for (i, acc) in intensity.iter_mut().enumerate() {
                *acc += slice.grid.interpolate(&line_intensity, grid.coordinate(i));
            }
        }
    }

    Ok(Measurement {
        grid,
        intensity,
        plane,
        camera_response: response,
    })
}

/// `max_i |a_i/max(a) - b_i/max(b)|`: L∞ error between peak-normalized
/// profiles. The agreement metric for oracle-vs-analytic comparisons.
pub fn peak_normalized_linf_error(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "profiles must share a grid");
    let pa = a.iter().cloned().fold(0.0, f64::max);
    let pb = b.iter().cloned().fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / pa - y / pb).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{MICROMETER as UM, MILLIMETER as MM, NANOMETER as NM, PER_MILLIMETER};
    use approx::assert_relative_eq;

    fn reference() -> OpticalSystem {
        OpticalSystem::new(75.0 * MM, 300.0 * PER_MILLIMETER, 400.0 * NM, 700.0 * NM).unwrap()
    }

    #[test]
    fn centered_dft_matches_direct_sum() {
        let n = 16usize;
        let input: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.91).cos()))
            .collect();
        let mut fast = input.clone();
        centered_dft(&mut fast);
        for (k, fast_k) in fast.iter().enumerate() {
            let mut direct = Complex64::new(0.0, 0.0);
            for (i, x) in input.iter().enumerate() {
                let phase = -core::f64::consts::TAU
                    * ((k as f64 - n as f64 / 2.0) * (i as f64 - n as f64 / 2.0))
                    / n as f64;
                direct += x * Complex64::new(phase.cos(), phase.sin());
            }
            direct /= (n as f64).sqrt();
            assert!((fast_k - direct).norm() < 1e-12, "bin {k}");
        }
    }

    #[test]
    fn ramp_bin_is_integer() {
        let sys = reference();
        let ap = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        let bin = grids.ramp_bin();
        assert_eq!(bin, bin.round());
    }

    #[test]
    fn lens_ft_gaussian_width() {
        // amplitude std σ maps to λf/(2πσ)
        let sys = reference();
        let ap = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        let grid = grids.odd_grid();
        let sigma = 200.0 * UM;
        let values: Vec<Complex64> = grid
            .iter()
            .map(|x| Complex64::new((-x * x / (2.0 * sigma * sigma)).exp(), 0.0))
            .collect();
        let field = FieldSlice::new(grid, values, 500.0 * NM, Plane::P1).unwrap();
        let out = lens_ft(&field, sys.focal_length()).unwrap();

        let mags = out.magnitudes();
        let m0: f64 = mags.iter().sum();
        let m2: f64 = mags
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let x = out.grid.coordinate(i);
                x * x * m
            })
            .sum();
        let measured = (m2 / m0).sqrt();
        let expected = 500.0 * NM * sys.focal_length() / (core::f64::consts::TAU * sigma);
        assert_relative_eq!(measured, expected, max_relative = 1e-6);
    }

    #[test]
    fn lens_ft_parseval_and_involution() {
        let sys = reference();
        let ap = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        let grid = grids.odd_grid();
        // asymmetric but finite field
        let values: Vec<Complex64> = grid
            .iter()
            .map(|x| {
                let t = x / (300.0 * UM);
                Complex64::new((-t * t).exp() * (1.0 + 0.3 * t), 0.1 * (-t * t).exp())
            })
            .collect();
        let field = FieldSlice::new(grid, values.clone(), 500.0 * NM, Plane::P1).unwrap();

        let once = lens_ft(&field, sys.focal_length()).unwrap();
        assert_relative_eq!(
            once.sum_squared_magnitude(),
            field.sum_squared_magnitude(),
            max_relative = 1e-9
        );

        // twice: coordinate flip of the samples, scale -1/(λf)
        let twice = lens_ft(&once, sys.focal_length()).unwrap();
        let n = grid.count();
        let mut worst = 0.0f64;
        for k in 0..n {
            let flipped = if k == 0 { values[0] } else { values[n - k] };
            worst = worst.max((twice.values[k] - flipped).norm());
        }
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(worst / peak < 1e-6, "flip residual {}", worst / peak);
        let lf = 500.0 * NM * sys.focal_length();
        assert_relative_eq!(twice.scale.re, -1.0 / lf, max_relative = 1e-12);
        assert!(twice.scale.im.abs() < 1e-12 / lf);
    }

    #[test]
    fn open_pupil_is_identity_and_conserves_energy() {
        let sys = reference();
        let wide = ApertureProfile::open_with_width(1.0).unwrap(); // wider than any grid
        let probe = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &probe).unwrap();
        let line = SpectralLine {
            wavelength: 500.0 * NM,
            intensity: 2.5,
        };
        let p1 = grids.point_source_slice(0.0, line).unwrap();
        assert_relative_eq!(p1.power(), 2.5, max_relative = 1e-12);

        let p2 = lens_ft(&p1, sys.focal_length()).unwrap();
        let p2_masked = apply_pupil(&p2, &wide).unwrap();
        for (a, b) in p2.values.iter().zip(&p2_masked.values) {
            assert_eq!(a, b);
        }

        let p5 = propagate_line(&grids, &wide, 0.0, line, Plane::P5).unwrap();
        assert_relative_eq!(p5.power(), p1.power(), max_relative = 1e-6);
    }

    #[test]
    fn sub_step_slit_keeps_single_column() {
        let sys = reference();
        let probe = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &probe).unwrap();
        let line = SpectralLine {
            wavelength: 500.0 * NM,
            intensity: 1.0,
        };
        let p1 = grids.point_source_slice(0.0, line).unwrap();
        let p2 = lens_ft(&p1, sys.focal_length()).unwrap();
        let narrow = ApertureProfile::slit(0.5 * p2.grid.step()).unwrap();
        let masked = apply_pupil(&p2, &narrow).unwrap();
        let nonzero = masked.values.iter().filter(|v| v.norm() > 0.0).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn rainbow_peak_sits_at_lambda_f_nu0() {
        let sys = reference();
        let ap = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        let source = PointSource::monochromatic(0.0, 500.0 * NM).unwrap();
        let m = measure(&source, &ap, &grids, Plane::P4, None, None).unwrap();
        let expected = sys.rainbow_position(500.0 * NM);
        assert_relative_eq!(expected, 11.25 * MM, max_relative = 1e-12);
        assert!(
            (m.peak_position() - expected).abs() <= m.grid.step(),
            "peak at {} expected {}",
            m.peak_position(),
            expected
        );
    }

    #[test]
    fn two_line_peak_separation() {
        // 520/532 nm → rainbow-plane centers 270 µm apart
        let sys = reference();
        let ap = ApertureProfile::gaussian(200.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        for (lambda, expected) in [(520.0 * NM, 0.0117f64), (532.0 * NM, 0.01197f64)] {
            let source = PointSource::monochromatic(0.0, lambda).unwrap();
            let m = measure(&source, &ap, &grids, Plane::P4, None, None).unwrap();
            assert!(
                (m.peak_position() - expected).abs() <= m.grid.step(),
                "peak {} expected {}",
                m.peak_position(),
                expected
            );
        }
    }

    #[test]
    fn off_axis_source_lands_upright_on_p5() {
        // P1→P5 is two 4f relays: the image on P3 is flipped (-x0) and P5
        // flips it back, so the point comes out upright with its PSF shape
        // unchanged.
        let sys = reference();
        let ap = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        let x0 = 40.0 * grids.odd_step();
        let source = PointSource::monochromatic(x0, 500.0 * NM).unwrap();

        let p3 = propagate_line(
            &grids,
            &ap,
            x0,
            SpectralLine {
                wavelength: 500.0 * NM,
                intensity: 1.0,
            },
            Plane::P3,
        )
        .unwrap();
        let mut best = 0;
        for (i, v) in p3.values.iter().enumerate() {
            if v.norm_sqr() > p3.values[best].norm_sqr() {
                best = i;
            }
        }
        assert!((p3.grid.coordinate(best) + x0).abs() <= p3.grid.step());

        let m = measure(&source, &ap, &grids, Plane::P5, None, None).unwrap();
        assert!(
            (m.peak_position() - x0).abs() <= m.grid.step(),
            "peak {} expected {}",
            m.peak_position(),
            x0
        );

        // shape identical to the on-axis PSF after recentering
        let centered = measure(
            &PointSource::monochromatic(0.0, 500.0 * NM).unwrap(),
            &ap,
            &grids,
            Plane::P5,
            None,
            None,
        )
        .unwrap();
        let shift = m.grid.nearest_index(x0) - m.grid.nearest_index(0.0);
        let n = m.intensity.len();
        let moved: Vec<f64> = (0..n - shift).map(|i| m.intensity[i + shift]).collect();
        let err = peak_normalized_linf_error(&moved, &centered.intensity[..n - shift]);
        assert!(err < 1e-6, "recentered shape error {err}");
    }

    #[test]
    fn incoherent_additivity_is_exact() {
        let sys = reference();
        let ap = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        let l1 = SpectralLine {
            wavelength: 520.0 * NM,
            intensity: 1.0,
        };
        let l2 = SpectralLine {
            wavelength: 532.0 * NM,
            intensity: 0.6,
        };
        let out_grid = grids.even_grid(520.0 * NM);
        let both = measure(
            &PointSource::new(0.0, vec![l1, l2]).unwrap(),
            &ap,
            &grids,
            Plane::P4,
            None,
            Some(out_grid),
        )
        .unwrap();
        let first = measure(
            &PointSource::new(0.0, vec![l1]).unwrap(),
            &ap,
            &grids,
            Plane::P4,
            None,
            Some(out_grid),
        )
        .unwrap();
        let second = measure(
            &PointSource::new(0.0, vec![l2]).unwrap(),
            &ap,
            &grids,
            Plane::P4,
            None,
            Some(out_grid),
        )
        .unwrap();
        for i in 0..both.intensity.len() {
            assert_eq!(both.intensity[i], first.intensity[i] + second.intensity[i]);
        }
    }

    #[test]
    fn p5_psf_matches_analytic_spatial_blur() {
        let sys = reference();
        let ap = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        let source = PointSource::monochromatic(0.0, 500.0 * NM).unwrap();
        let m = measure(&source, &ap, &grids, Plane::P5, None, None).unwrap();

        // restrict to the ±1 mm sensor window
        let lo = m.grid.nearest_index(-(1.0 * MM));
        let hi = m.grid.nearest_index(1.0 * MM);
        let measured = &m.intensity[lo..=hi];
        let analytic: Vec<f64> = (lo..=hi)
            .map(|i| {
                let x = m.grid.coordinate(i);
                ap.fourier_psd(-x / (500.0 * NM * sys.focal_length()))
            })
            .collect();
        let err = peak_normalized_linf_error(measured, &analytic);
        assert!(err < 1e-3, "L-inf error {err}");
    }

    #[test]
    fn default_open_pupil_is_propagatable() {
        // the adaptive ramp bin makes room for the 10 mm open footprint
        let sys = reference();
        let open = ApertureProfile::open();
        let grids = PropagationGrids::for_system(&sys, &open).unwrap();
        assert_eq!(grids.ramp_bin(), grids.ramp_bin().round());
        let source = PointSource::monochromatic(0.0, 500.0 * NM).unwrap();
        let m = measure(&source, &open, &grids, Plane::P4, None, None).unwrap();
        let expected = sys.rainbow_position(500.0 * NM);
        assert!(
            (m.peak_position() - expected).abs() <= m.grid.step(),
            "peak {} expected {expected}",
            m.peak_position()
        );
    }

    #[test]
    fn measure_validates_inputs() {
        let sys = reference();
        let ap = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = PropagationGrids::for_system(&sys, &ap).unwrap();
        let source = PointSource::monochromatic(0.0, 500.0 * NM).unwrap();
        assert!(measure(&source, &ap, &grids, Plane::P3, None, None).is_err());
        assert!(measure(&source, &ap, &grids, Plane::P4, Some(&[1.0, 2.0]), None).is_err());
        let out_of_band = PointSource::monochromatic(0.0, 900.0 * NM).unwrap();
        assert!(measure(&out_of_band, &ap, &grids, Plane::P4, None, None).is_err());
    }
}

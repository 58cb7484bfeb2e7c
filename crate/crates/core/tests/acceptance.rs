//! End-to-end acceptance suite. Each test covers one numbered exit criterion
//! and prints a `PASS n — …` line (run with `--nocapture` to see them all).

use spectro_core::aperture::ApertureProfile;
use spectro_core::blur::{
    self, spectral_blur, sweep_to_csv, tradeoff_sweep, uncertainty_product, ApertureFamily,
    KernelGrids, DEFAULT_SENSOR_HALF_WIDTH,
};
use spectro_core::filtering::{
    effective_spectral_filter, filter_scene, masked_aperture_product, psf_vs_offset_sweep,
    HyperspectralCube, MaskShape, RainbowMask, SceneOptions, SpectralFilter,
};
use spectro_core::grid::Grid1D;
use spectro_core::metrics::{mtf, mtf_sweep_to_csv, mtf_tradeoff_sweep, resolution_at_contrast};
use spectro_core::propagation::{
    measure, peak_normalized_linf_error, Plane, PointSource, PropagationGrids,
};
use spectro_core::system::OpticalSystem;
use spectro_core::units::{MICROMETER as UM, MILLIMETER as MM, NANOMETER as NM, PER_MILLIMETER};

fn reference_system() -> OpticalSystem {
    OpticalSystem::new(75.0 * MM, 300.0 * PER_MILLIMETER, 400.0 * NM, 700.0 * NM).unwrap()
}

fn system(f_mm: f64, grooves_per_mm: f64) -> OpticalSystem {
    OpticalSystem::new(
        f_mm * MM,
        grooves_per_mm * PER_MILLIMETER,
        400.0 * NM,
        700.0 * NM,
    )
    .unwrap()
}

#[test]
fn a01_gaussian_apertures_saturate_the_bound_across_the_grid() {
    let sigmas = [100.0 * UM, 250.0 * UM, 500.0 * UM, 1000.0 * UM, 2000.0 * UM];
    let focals = [50.0, 75.0, 100.0];
    let grooves = [150.0, 300.0, 600.0];
    let lambdas = [450.0 * NM, 500.0 * NM, 550.0 * NM, 650.0 * NM];

    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    for &sigma in &sigmas {
        let aperture = ApertureProfile::gaussian(sigma).unwrap();
        for &f in &focals {
            for &g in &grooves {
                let sys = system(f, g);
                let grids = KernelGrids::recommended(&aperture, &sys).unwrap();
                for &lambda in &lambdas {
                    let rep = uncertainty_product(&aperture, &sys, lambda, &grids).unwrap();
                    assert!(
                        rep.ratio >= 0.999 && rep.ratio <= 1.001,
                        "σ={sigma:e} f={f}mm ν0={g}/mm λ={lambda:e}: ratio {}",
                        rep.ratio
                    );
                    worst = worst.max((rep.ratio - 1.0).abs());
                    cases += 1;
                }
            }
        }
    }
    println!(
        "PASS 1 — gaussian bound saturation: {cases} configurations, max |ratio-1| = {worst:.2e}"
    );
}

#[test]
fn a02_slit_apertures_stay_above_the_bound() {
    let sys = reference_system();
    let widths = [
        100.0 * UM,
        250.0 * UM,
        450.0 * UM,
        600.0 * UM,
        1000.0 * UM,
        1500.0 * UM,
        2000.0 * UM,
    ];
    let mut min_ratio = f64::INFINITY;
    for &w in &widths {
        let aperture = ApertureProfile::slit(w).unwrap();
        let grids = KernelGrids::recommended(&aperture, &sys).unwrap();
        let rep = uncertainty_product(&aperture, &sys, 500.0 * NM, &grids).unwrap();
        assert!(rep.ratio >= 0.999, "W={w:e}: ratio {}", rep.ratio);
        assert!(
            rep.ratio > 1.0,
            "W={w:e}: ratio {} not strictly above 1",
            rep.ratio
        );
        min_ratio = min_ratio.min(rep.ratio);
    }
    println!(
        "PASS 2 — slit bound inequality over ±1 mm window: {} widths, min ratio = {min_ratio:.4}",
        widths.len()
    );
}

#[test]
fn a03_reference_numbers_at_the_bench_configuration() {
    let sys = reference_system();
    let aperture = ApertureProfile::gaussian(500.0 * UM).unwrap();
    let grids = KernelGrids::recommended(&aperture, &sys).unwrap();
    let rep = uncertainty_product(&aperture, &sys, 500.0 * NM, &grids).unwrap();

    let sigma_lambda_nm = rep.sigma_lambda / NM;
    let sigma_x_um = rep.sigma_x / UM;
    let product_nm_um = rep.product / (NM * UM);
    assert!(
        (sigma_lambda_nm / 15.7135 - 1.0).abs() <= 1e-3,
        "σ_λ = {sigma_lambda_nm} nm"
    );
    assert!(
        (sigma_x_um / 8.4405 - 1.0).abs() <= 1e-3,
        "σ_x = {sigma_x_um} µm"
    );
    assert!(
        (product_nm_um / 132.629 - 1.0).abs() <= 2e-3,
        "product = {product_nm_um} nm·µm"
    );

    let bound_550 = sys.uncertainty_bound(550.0 * NM).unwrap() / (NM * UM);
    assert!(
        (bound_550 / 145.9 - 1.0).abs() <= 1e-3,
        "bound(550nm) = {bound_550}"
    );
    assert_eq!(format!("{bound_550:.1}"), "145.9");
    // the same constant evaluated at 500 nm is 132.6, not 145.9
    let bound_500 = sys.uncertainty_bound(500.0 * NM).unwrap() / (NM * UM);
    assert_eq!(format!("{bound_500:.1}"), "132.6");

    println!(
        "PASS 3 — reference numbers: σ_λ = {sigma_lambda_nm:.3} nm, σ_x = {sigma_x_um:.3} µm, \
         product = {product_nm_um:.1} nm·µm, bound(550 nm) = {bound_550:.1} nm·µm"
    );
}

#[test]
fn a04_reciprocal_tradeoff_line_through_origin() {
    let sys = reference_system();
    let widths = [
        100.0 * UM,
        200.0 * UM,
        350.0 * UM,
        500.0 * UM,
        750.0 * UM,
        1000.0 * UM,
        1500.0 * UM,
        2000.0 * UM,
    ];
    let rows = tradeoff_sweep(
        ApertureFamily::Gaussian,
        &widths,
        &sys,
        500.0 * NM,
        DEFAULT_SENSOR_HALF_WIDTH,
    )
    .unwrap();
    let fit = blur::fit_reciprocal_line(&rows).unwrap();
    let bound = sys.uncertainty_bound(500.0 * NM).unwrap();
    assert!(
        (fit.slope * bound - 1.0).abs() <= 5e-3,
        "slope·bound = {}",
        fit.slope * bound
    );
    assert!(fit.r_squared >= 0.9999, "R² = {}", fit.r_squared);
    println!(
        "PASS 4 — reciprocal line: slope·bound = {:.6}, R² = {:.6}",
        fit.slope * bound,
        fit.r_squared
    );
}

#[test]
fn a05_propagation_oracle_agrees_with_analytic_kernels() {
    let sys = reference_system();
    let lambdas = [450.0 * NM, 550.0 * NM, 650.0 * NM];
    let pupils: [(&str, ApertureProfile, f64); 2] = [
        (
            "gaussian σ=500µm",
            ApertureProfile::gaussian(500.0 * UM).unwrap(),
            5.0 * 500.0 * UM,
        ),
        (
            "slit W=450µm",
            ApertureProfile::slit(450.0 * UM).unwrap(),
            0.55 * 450.0 * UM,
        ),
    ];

    let mut worst_p4: f64 = 0.0;
    let mut worst_p5: f64 = 0.0;
    for (name, aperture, window_half) in &pupils {
        // 128k samples: hard slit edges quantize the pupil-plane grid, and
        // the fine step keeps the transform-domain (P5) mismatch a factor of
        // two under the 1e-3 gate
        let grids = PropagationGrids::with_size(&sys, aperture, 131072).unwrap();
        for &lambda in &lambdas {
            let source = PointSource::monochromatic(0.0, lambda).unwrap();
            let center = sys.rainbow_position(lambda);

            // Rainbow-plane kernel against |a(-(x-λfν0))|²
            let p4 = measure(&source, aperture, &grids, Plane::P4, None, None).unwrap();
            assert!(
                (p4.peak_position() - center).abs() <= p4.grid.step(),
                "{name} λ={lambda:e}: P4 peak {} vs {center}",
                p4.peak_position()
            );
            let lo = p4.grid.nearest_index(center - window_half);
            let hi = p4.grid.nearest_index(center + window_half);
            let measured = &p4.intensity[lo..=hi];
            let analytic: Vec<f64> = (lo..=hi)
                .map(|i| {
                    let a = aperture.evaluate(-(p4.grid.coordinate(i) - center));
                    a * a
                })
                .collect();
            let err4 = peak_normalized_linf_error(measured, &analytic);
            assert!(err4 <= 1e-3, "{name} λ={lambda:e}: P4 error {err4}");
            worst_p4 = worst_p4.max(err4);

            // Image-plane PSF against |A(-x/λf)|² over the sensor window
            let p5 = measure(&source, aperture, &grids, Plane::P5, None, None).unwrap();
            let lo = p5.grid.nearest_index(-(1.0 * MM));
            let hi = p5.grid.nearest_index(1.0 * MM);
            let measured = &p5.intensity[lo..=hi];
            let analytic: Vec<f64> = (lo..=hi)
                .map(|i| {
                    aperture.fourier_psd(-p5.grid.coordinate(i) / (lambda * sys.focal_length()))
                })
                .collect();
            let err5 = peak_normalized_linf_error(measured, &analytic);
            assert!(err5 <= 1e-3, "{name} λ={lambda:e}: P5 error {err5}");
            worst_p5 = worst_p5.max(err5);
        }
    }
    println!(
        "PASS 5 — oracle agreement (2 pupils × 3 λ): max L∞ error P4 = {worst_p4:.2e}, \
         P5 = {worst_p5:.2e}; P4 peaks at λfν0 within one step"
    );
}

#[test]
fn a06_slit_slit_mask_overlap_and_psf_broadening() {
    let sys = reference_system();
    let width = 600.0 * UM;
    let aperture = ApertureProfile::slit(width).unwrap();
    let source = 520.0 * NM;
    let offsets = [0.0, 4.0 * NM, 8.0 * NM, 12.0 * NM];

    let mut stds = Vec::new();
    for &dl in &offsets {
        let mask = RainbowMask::slit(source + dl, width).unwrap();
        let profile = masked_aperture_product(&aperture, &mask, source, &sys).unwrap();
        let expected = width - sys.rainbow_position(dl);
        let measured = profile.support_width().unwrap();
        assert!(
            (measured - expected).abs() <= profile.grid.step(),
            "Δλ={dl:e}: width {measured:e} vs {expected:e} (step {:e})",
            profile.grid.step()
        );

        let x_grid = Grid1D::centered(1.0 * MM, 4097).unwrap();
        let psf =
            spectro_core::filtering::filtered_psf(&aperture, &mask, source, &sys, x_grid).unwrap();
        stds.push(psf.std_dev().unwrap());
    }
    for w in stds.windows(2) {
        assert!(w[1] > w[0], "PSF stds not strictly increasing: {stds:?}");
    }
    println!(
        "PASS 6 — slit+slit: overlap width = W − Δλ·fν0 within one grid step for Δλ ∈ {{0,4,8,12}} nm; \
         PSF std strictly increasing ({:.2} → {:.2} µm)",
        stds[0] / UM,
        stds[stds.len() - 1] / UM
    );
}

#[test]
fn a07_gaussian_gaussian_mask_flat_psf_and_amplitude_law() {
    let sys = reference_system();
    let sigma = 500.0 * UM;
    let aperture = ApertureProfile::gaussian(sigma).unwrap();
    let source = 520.0 * NM;
    // plane offsets 0..3σ expressed as wavelength offsets
    let offsets: Vec<f64> = (0..=6)
        .map(|k| 0.5 * k as f64 * sigma / sys.f_nu0())
        .collect();

    let x_grid = Grid1D::centered(1.0 * MM, 2049).unwrap();
    let rows = psf_vs_offset_sweep(
        &aperture,
        MaskShape::Gaussian { sigma },
        &offsets,
        &sys,
        source,
        x_grid,
    )
    .unwrap();
    let stds: Vec<f64> = rows.iter().map(|r| r.psf_std.unwrap()).collect();
    let spread = stds.iter().cloned().fold(0.0f64, f64::max)
        / stds.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread <= 1.01, "PSF std spread {spread} over Δ ∈ [0, 3σ]");

    // peak field amplitude of the masked profile: exp(-Δ²/4σ²) by completing
    // the square; peak intensity of the PSF sweep falls as its square
    let mut worst: f64 = 0.0;
    for (k, &dl) in offsets.iter().enumerate() {
        let mask = RainbowMask::gaussian(source + dl, sigma).unwrap();
        let profile = masked_aperture_product(&aperture, &mask, source, &sys).unwrap();
        let delta = sys.rainbow_position(dl);
        let expected = (-delta * delta / (4.0 * sigma * sigma)).exp();
        let rel = (profile.peak() / expected - 1.0).abs();
        assert!(
            rel <= 0.01,
            "Δ={delta:e}: amplitude {} vs {expected}",
            profile.peak()
        );
        worst = worst.max(rel);

        let peak_rel = rows[k].peak_intensity / rows[0].peak_intensity;
        let expected_intensity = (-delta * delta / (2.0 * sigma * sigma)).exp();
        assert!(
            (peak_rel / expected_intensity - 1.0).abs() <= 0.01,
            "Δ={delta:e}: PSF peak ratio {peak_rel} vs {expected_intensity}"
        );
    }
    println!(
        "PASS 7 — gaussian+gaussian: PSF std spread = {:.4} ≤ 1.01 over Δ ∈ [0, 3σ]; \
         amplitude follows exp(-Δ²/4σ²) within {:.2e}",
        spread, worst
    );
}

#[test]
fn a08_two_laser_blocking_demands_a_narrow_pupil() {
    let sys = reference_system();
    let width = 512usize;
    let height = 8usize;
    let options = SceneOptions::default(); // 4 µm pitch, ±1 mm kernel

    let spot = |x: usize, lambda: f64| {
        let mut data = vec![0.0; width * height];
        data[4 * width + x] = 1.0;
        HyperspectralCube::new(width, height, vec![lambda], data).unwrap()
    };
    let cube_520 = spot(128, 520.0 * NM);
    let cube_532 = spot(384, 532.0 * NM);

    let narrow = ApertureProfile::slit(200.0 * UM).unwrap();
    let open = ApertureProfile::open();
    let blocker = RainbowMask::blocker(532.0 * NM, 300.0 * UM).unwrap();

    // premise: spectral stds on either side of the criterion's thresholds
    let narrow_sigma_lambda = spectral_blur(
        &narrow,
        &sys,
        KernelGrids::recommended(&narrow, &sys).unwrap().spectral,
    )
    .unwrap()
    .std_dev()
    .unwrap();
    assert!(
        narrow_sigma_lambda <= 3.0 * NM,
        "σ_λ = {narrow_sigma_lambda:e}"
    );
    let open_sigma_lambda = spectral_blur(
        &open,
        &sys,
        KernelGrids::recommended(&open, &sys).unwrap().spectral,
    )
    .unwrap()
    .std_dev()
    .unwrap();
    assert!(
        open_sigma_lambda >= 20.0 * NM,
        "open σ_λ = {open_sigma_lambda:e}"
    );

    let energy = |cube: &HyperspectralCube, ap: &ApertureProfile, filt: &SpectralFilter| {
        filter_scene(cube, filt, ap, &sys, &options)
            .unwrap()
            .energy()
    };

    // narrow pupil: 532 suppressed, 520 retained
    let blocked = SpectralFilter::Mask(blocker.clone());
    let suppression = energy(&cube_532, &narrow, &blocked)
        / energy(&cube_532, &narrow, &SpectralFilter::Identity);
    let retention = energy(&cube_520, &narrow, &blocked)
        / energy(&cube_520, &narrow, &SpectralFilter::Identity);
    assert!(suppression < 0.01, "532 nm suppression ratio {suppression}");
    assert!(retention > 0.90, "520 nm retention {retention}");

    // the price: the retained spot is far blurrier than with an open pupil
    let narrow_img = filter_scene(&cube_520, &blocked, &narrow, &sys, &options).unwrap();
    let open_img =
        filter_scene(&cube_520, &SpectralFilter::Identity, &open, &sys, &options).unwrap();
    let blur_ratio = narrow_img.x_std_pixels() / open_img.x_std_pixels();
    assert!(blur_ratio >= 3.0, "spatial std ratio {blur_ratio}");

    // open pupil: blocking fails
    let open_532_retention =
        energy(&cube_532, &open, &blocked) / energy(&cube_532, &open, &SpectralFilter::Identity);
    assert!(
        open_532_retention > 0.20,
        "open-pupil 532 retention {open_532_retention}"
    );

    // cross-check against the effective filter the mask induces
    let t = effective_spectral_filter(&blocker, &open, &sys, &[532.0 * NM]).unwrap();
    assert!((open_532_retention - t[0]).abs() < 0.02);

    println!(
        "PASS 8 — two-laser blocking: narrow pupil suppresses 532 nm to {suppression:.2e} \
         with 520 nm retention {retention:.3} and blur ratio {blur_ratio:.1}×; \
         open pupil retains {open_532_retention:.2} of 532 nm (blocking fails)"
    );
}

#[test]
fn a09_std_and_mtf_tradeoffs_are_monotone_and_gaussian_matches_closed_form() {
    let sys = reference_system();
    let lambda = 500.0 * NM;
    let threshold = 0.30;
    let families = [
        (
            ApertureFamily::Gaussian,
            vec![100.0 * UM, 250.0 * UM, 500.0 * UM, 1000.0 * UM, 2000.0 * UM],
        ),
        (
            ApertureFamily::Slit,
            vec![
                100.0 * UM,
                250.0 * UM,
                450.0 * UM,
                600.0 * UM,
                1000.0 * UM,
                2000.0 * UM,
            ],
        ),
    ];

    for (family, widths) in &families {
        let std_rows =
            tradeoff_sweep(*family, widths, &sys, lambda, DEFAULT_SENSOR_HALF_WIDTH).unwrap();
        for w in std_rows.windows(2) {
            assert!(
                w[1].report.sigma_lambda > w[0].report.sigma_lambda
                    && w[1].report.sigma_x < w[0].report.sigma_x,
                "{family:?}: std tradeoff not monotone"
            );
        }
        let mtf_rows = mtf_tradeoff_sweep(
            *family,
            widths,
            &sys,
            lambda,
            threshold,
            DEFAULT_SENSOR_HALF_WIDTH,
        )
        .unwrap();
        for w in mtf_rows.windows(2) {
            assert!(
                w[1].spectral_resolution < w[0].spectral_resolution
                    && w[1].spatial_resolution > w[0].spatial_resolution,
                "{family:?}: MTF tradeoff not monotone"
            );
        }
    }

    // gaussian MTF-30% against the closed forms for both kernels
    let coeff = ((1.0f64 / threshold).ln() / (2.0 * core::f64::consts::PI.powi(2))).sqrt();
    let mut worst: f64 = 0.0;
    for &sigma in &families[0].1 {
        let aperture = ApertureProfile::gaussian(sigma).unwrap();
        let grids = KernelGrids::recommended(&aperture, &sys).unwrap();
        let pair = blur::blur_pair(&aperture, &sys, lambda, &grids).unwrap();

        let sigma_lambda = sigma / (core::f64::consts::SQRT_2 * sys.f_nu0());
        let nu_spec = resolution_at_contrast(&mtf(&pair.spectral).unwrap(), threshold).unwrap();
        worst = worst.max((nu_spec / (coeff / sigma_lambda) - 1.0).abs());

        let sigma_x = lambda * sys.focal_length()
            / (2.0 * core::f64::consts::SQRT_2 * core::f64::consts::PI * sigma);
        let nu_spat = resolution_at_contrast(&mtf(&pair.spatial).unwrap(), threshold).unwrap();
        worst = worst.max((nu_spat / (coeff / sigma_x) - 1.0).abs());
    }
    assert!(worst <= 1e-3, "gaussian MTF-30% closed-form error {worst}");
    println!(
        "PASS 9 — std and MTF-30% tradeoffs monotone for both families; \
         gaussian MTF-30% within {worst:.2e} of the closed form"
    );
}

#[test]
fn a10_determinism_and_invariance_suite() {
    let lambda = 500.0 * NM;

    // focal-length invariance of the product
    let aperture = ApertureProfile::gaussian(500.0 * UM).unwrap();
    let mut products = Vec::new();
    for f in [50.0, 75.0, 100.0] {
        let sys = system(f, 300.0);
        let grids = KernelGrids::recommended(&aperture, &sys).unwrap();
        products.push(
            uncertainty_product(&aperture, &sys, lambda, &grids)
                .unwrap()
                .product,
        );
    }
    let focal_spread = products
        .iter()
        .map(|p| (p / products[0] - 1.0).abs())
        .fold(0.0f64, f64::max);
    assert!(focal_spread <= 1e-6, "focal spread {focal_spread}");

    // scale invariance: gaussian on a fixed window; slit with the sensor
    // window co-scaled (its spatial moment is window-defined)
    let sys = reference_system();
    let mut scale_spread: f64 = 0.0;
    for s in [0.5, 2.0] {
        let base = ApertureProfile::gaussian(500.0 * UM).unwrap();
        let grids = KernelGrids::recommended(&base, &sys).unwrap();
        let p0 = uncertainty_product(&base, &sys, lambda, &grids)
            .unwrap()
            .product;
        let scaled = base.scale(s).unwrap();
        let grids = KernelGrids::recommended(&scaled, &sys).unwrap();
        let p1 = uncertainty_product(&scaled, &sys, lambda, &grids)
            .unwrap()
            .product;
        scale_spread = scale_spread.max((p1 / p0 - 1.0).abs());

        let base = ApertureProfile::slit(450.0 * UM).unwrap();
        let grids =
            KernelGrids::with_sensor_half_width(&base, &sys, DEFAULT_SENSOR_HALF_WIDTH).unwrap();
        let p0 = uncertainty_product(&base, &sys, lambda, &grids)
            .unwrap()
            .product;
        // the slit PSF rescales as h(x/s); its window-defined moment matches
        // when the window co-scales
        let scaled = base.scale(s).unwrap();
        let grids =
            KernelGrids::with_sensor_half_width(&scaled, &sys, DEFAULT_SENSOR_HALF_WIDTH * s)
                .unwrap();
        let p1 = uncertainty_product(&scaled, &sys, lambda, &grids)
            .unwrap()
            .product;
        scale_spread = scale_spread.max((p1 / p0 - 1.0).abs());
    }
    assert!(scale_spread <= 1e-6, "scale spread {scale_spread}");

    // λ-linearity of the gaussian product
    let grids = KernelGrids::recommended(&aperture, &sys).unwrap();
    let p500 = uncertainty_product(&aperture, &sys, 500.0 * NM, &grids)
        .unwrap()
        .product;
    let p650 = uncertainty_product(&aperture, &sys, 650.0 * NM, &grids)
        .unwrap()
        .product;
    let linearity = (p650 / p500 / (650.0 / 500.0) - 1.0).abs();
    assert!(linearity <= 1e-6, "λ-linearity deviation {linearity}");

    // byte-identical CSV on recomputation
    let widths = [250.0 * UM, 500.0 * UM, 1000.0 * UM];
    let csv_a = sweep_to_csv(
        &tradeoff_sweep(ApertureFamily::Gaussian, &widths, &sys, lambda, 1.0 * MM).unwrap(),
    );
    let csv_b = sweep_to_csv(
        &tradeoff_sweep(ApertureFamily::Gaussian, &widths, &sys, lambda, 1.0 * MM).unwrap(),
    );
    assert_eq!(csv_a, csv_b);
    let mtf_a = mtf_sweep_to_csv(
        &mtf_tradeoff_sweep(ApertureFamily::Slit, &widths, &sys, lambda, 0.30, 1.0 * MM).unwrap(),
        0.30,
    );
    let mtf_b = mtf_sweep_to_csv(
        &mtf_tradeoff_sweep(ApertureFamily::Slit, &widths, &sys, lambda, 0.30, 1.0 * MM).unwrap(),
        0.30,
    );
    assert_eq!(mtf_a, mtf_b);

    println!(
        "PASS 10 — invariances: focal {focal_spread:.2e}, scale {scale_spread:.2e}, \
         λ-linearity {linearity:.2e} (all ≤ 1e-6); CSV recomputation byte-identical"
    );
}

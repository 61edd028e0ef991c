mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use common::{double_slit_oracle, extinction_geometry, filter_transmission_oracle, moments, LAMBDA};
use eprsim::experiment::{bob_train, pattern_from_pure, Experiment, ExperimentConfig};
use eprsim::optics::{apply_lens, apply_mask, apply_tilt, apply_train_traced, direction_filter, propagate};
use eprsim::{Complex64, Element, Field, Grid};
use statrs::function::erf::erf;

#[test]
fn gaussian_beam_width_follows_rayleigh_law() {
    let grid = Grid::new(1024, 2e-6).unwrap();
    let sigma0 = 20e-6;
    // Intensity std σ means a 1/e² radius w0 = 2σ.
    let w0 = 2.0 * sigma0;
    let z_r = PI * w0 * w0 / LAMBDA;
    let f = Field::gaussian(grid, 0.0, sigma0).unwrap();
    let critical = grid.n() as f64 * grid.dy().powi(2) / LAMBDA;
    let y = grid.coords();
    for frac in [0.25, 0.5, 0.75, 1.0] {
        let z = frac * critical;
        let out = propagate(&f, z, LAMBDA).unwrap();
        let (_, sigma) = moments(&y, &out.intensity());
        let expected = sigma0 * (1.0 + (z / z_r).powi(2)).sqrt();
        assert!((sigma / expected - 1.0).abs() < 5e-3, "z={z}: {sigma} vs {expected}");
    }
}

#[test]
fn gaussian_beam_cascaded_steps_agree() {
    let grid = Grid::new(512, 4e-6).unwrap();
    let f = Field::gaussian(grid, 10e-6, 30e-6).unwrap();
    let once = propagate(&f, 0.02, LAMBDA).unwrap();
    let twice = propagate(&propagate(&f, 0.012, LAMBDA).unwrap(), 0.008, LAMBDA).unwrap();
    // Only the carrier phase kL, reduced separately per step, differs.
    assert!(twice.relative_l2(&once) < 1e-9);
}

/// Back-focal-plane field of a thin lens, from the Fresnel integral with the
/// input's closed-form spectrum:
/// `U(y) = e^{ikf} e^{-iπ/4} √(k/f) e^{iky²/2f} G(ky/f)`.
fn focal_plane_oracle(y: f64, focal: f64, sigma: f64, c: f64, q0: f64) -> Complex64 {
    let k = 2.0 * PI / LAMBDA;
    let carrier = Complex64::from_polar(1.0, (k * focal).rem_euclid(2.0 * PI) - PI / 4.0 + k * y * y / (2.0 * focal));
    carrier * (k / focal).sqrt() * common::gaussian_spectrum(k * y / focal, sigma, c, q0)
}

#[test]
fn lens_maps_input_spectrum_to_focal_plane() {
    let grid = Grid::new(1024, 5e-6).unwrap();
    let critical = grid.n() as f64 * grid.dy().powi(2) / LAMBDA;
    for &(focal, c, sigma, q0) in &[
        (critical, 0.0, 60e-6, 0.0),
        (critical, 150e-6, 80e-6, 4e4),
        (0.7 * critical, -100e-6, 70e-6, -3e4),
    ] {
        let f = Field::gaussian(grid, c, sigma)
            .unwrap()
            .map_pointwise(|y| Complex64::from_polar(1.0, q0 * y));
        let out = propagate(&apply_lens(&f, focal, LAMBDA).unwrap(), focal, LAMBDA).unwrap();
        let expected = Field::from_fn(grid, |y| focal_plane_oracle(y, focal, sigma, c, q0)).unwrap();
        let err = out.relative_l2(&expected);
        assert!(err < 1e-2, "f={focal} c={c}: relative L2 {err}");
    }
}

#[test]
fn tilt_shifts_spectral_centroid() {
    let grid = Grid::new(1024, 2e-6).unwrap();
    let k = 2.0 * PI / LAMBDA;
    let f = Field::gaussian(grid, 0.0, 50e-6).unwrap();
    let base = f.to_spectrum().centroid();
    for theta in [-0.02, 0.005, 0.03] {
        let shifted = apply_tilt(&f, theta, LAMBDA).unwrap().to_spectrum().centroid();
        assert!((shifted - base + k * theta).abs() < 1e-6 * k * theta.abs(), "θ={theta}");
    }
}

#[test]
fn aperture_passes_one_sigma_fraction() {
    let grid = Grid::new(2048, 1e-6).unwrap();
    let sigma = 100e-6;
    let f = Field::gaussian(grid, 0.0, sigma).unwrap();
    let (out, t) = apply_mask(
        &f,
        &Element::HardAperture {
            halfwidth: sigma,
            center: 0.0,
        },
    )
    .unwrap();
    let expected = erf(FRAC_1_SQRT_2);
    assert!((t / expected - 1.0).abs() < 1e-2, "{t} vs {expected}");
    assert!((out.norm2() - t).abs() < 1e-12);
}

#[test]
fn masks_are_idempotent() {
    let grid = Grid::new(256, 5e-6).unwrap();
    let f = Field::from_fn(grid, |y| Complex64::new((y * 1e4).cos(), (y * 3e3).sin())).unwrap();
    for m in [
        Element::HardAperture { halfwidth: 1.1e-4, center: 2e-5 },
        Element::Pinhole { radius: 3e-5, center: -1e-5 },
        Element::DoubleSlit { separation: 2e-4, width: 4e-5 },
        Element::BlockOutsideAperture { radius: 3e-4 },
    ] {
        let (once, _) = apply_mask(&f, &m).unwrap();
        let (twice, t2) = apply_mask(&once, &m).unwrap();
        assert_eq!(once, twice, "{}", m.name());
        assert_eq!(t2, 1.0);
    }
}

#[test]
fn double_slit_matches_fresnel_quadrature() {
    let grid = Grid::new(2048, 5e-6).unwrap();
    let (s, w) = (200e-6, 50e-6);
    let critical = grid.n() as f64 * grid.dy().powi(2) / LAMBDA;
    let distance = 0.8 * critical;
    let period = LAMBDA * distance / s;
    let plane = Field::plane_wave(grid, 0.0, LAMBDA).unwrap();
    let (lit, _) = apply_mask(&plane, &Element::DoubleSlit { separation: s, width: w }).unwrap();
    let screen = propagate(&lit, distance, LAMBDA).unwrap();

    // Shape comparison over the central ±3 fringes.
    let window: Vec<usize> = (0..grid.n()).filter(|&i| grid.coord(i).abs() <= 3.0 * period).collect();
    let sim: Vec<f64> = window.iter().map(|&i| screen.amp()[i].norm_sqr()).collect();
    // Each slit opens a whole number of samples; the oracle uses that width.
    let open = grid.coords().iter().filter(|y| (*y - 0.5 * s).abs() <= 0.5 * w * (1.0 + 1e-12)).count();
    let w_eff = open as f64 * grid.dy();
    let oracle: Vec<f64> = window
        .iter()
        .map(|&i| double_slit_oracle(grid.coord(i), s, w_eff, distance, LAMBDA))
        .collect();
    let (ss, so): (f64, f64) = (sim.iter().sum(), oracle.iter().sum());
    let num: f64 = sim.iter().zip(&oracle).map(|(a, b)| (a / ss - b / so).powi(2)).sum();
    let den: f64 = oracle.iter().map(|b| (b / so).powi(2)).sum();
    assert!((num / den).sqrt() < 2e-2, "shape error {}", (num / den).sqrt());

    let p = eprsim::experiment::Pattern::new(grid, screen.intensity()).unwrap();
    let spacing = eprsim::experiment::fringe_spacing(&p, (-3.0 * period, 3.0 * period))
        .unwrap()
        .unwrap();
    assert!((spacing / period - 1.0).abs() < 2e-2, "spacing {spacing} vs {period}");
}

#[test]
fn direction_filter_extinction_matches_quadrature() {
    let g = extinction_geometry();
    assert!(g.focal * g.theta >= 5.0 * g.pinhole_radius);
    let through = |incidence: f64| {
        let wave = Field::plane_wave(g.grid, incidence, g.wavelength).unwrap();
        direction_filter(&wave, g.theta, g.focal, g.pinhole_radius, g.aperture_radius, g.wavelength)
            .unwrap()
            .1
    };
    let ratio = through(g.theta) / through(0.0);
    let oracle = filter_transmission_oracle(&g, 0.0) / filter_transmission_oracle(&g, -g.theta);
    assert!(ratio >= 1e3, "extinction {ratio}");
    assert!((ratio / oracle - 1.0).abs() < 0.05, "simulated {ratio} vs quadrature {oracle}");
}

#[test]
fn flux_is_product_of_element_fractions() {
    let cfg = ExperimentConfig::default();
    let ex = Experiment::new(&cfg).unwrap();
    let (train, _) = bob_train(&cfg).unwrap();
    let e = ex.ensemble(eprsim::Basis::Momentum).unwrap();
    for m in e.members.iter().step_by(97) {
        let (_, fractions) = apply_train_traced(&m.state, &train).unwrap();
        let product: f64 = fractions.iter().product();
        let p = pattern_from_pure(&m.state, &train).unwrap();
        assert!((p.total_weight - product).abs() < 1e-8);
    }
}

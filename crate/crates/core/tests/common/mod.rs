//! Independent oracles and config generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use eprsim::experiment::{ExperimentConfig, Pattern};
use eprsim::state::build_epr_state;
use eprsim::{Complex64, Grid, JointState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LAMBDA: f64 = 633e-9;

/// Composite Simpson rule with `n` (rounded up to even) intervals.
pub fn simpson<T>(f: impl Fn(f64) -> T, a: f64, b: f64, n: usize) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Copy,
{
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + f(a + i as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Unitary transform of the unit-norm Gaussian with intensity std `sigma`,
/// centered at `c` and carrying transverse wavenumber `q0`.
pub fn gaussian_spectrum(q: f64, sigma: f64, c: f64, q0: f64) -> Complex64 {
    let amp = (2.0 * sigma * sigma / PI).powf(0.25) * (-sigma * sigma * (q - q0).powi(2)).exp();
    amp * Complex64::from_polar(1.0, -(q - q0) * c)
}

/// Mean and standard deviation of a non-negative density sampled at `x`.
pub fn moments(x: &[f64], p: &[f64]) -> (f64, f64) {
    let s: f64 = p.iter().sum();
    let mean = x.iter().zip(p).map(|(x, p)| x * p).sum::<f64>() / s;
    let var = x.iter().zip(p).map(|(x, p)| (x - mean).powi(2) * p).sum::<f64>() / s;
    (mean, var.sqrt())
}

/// Valid, sampling-clean configuration on a small grid whose filter passes a
/// sizeable part of Bob's light.
pub fn random_config(rng: &mut ChaCha8Rng) -> ExperimentConfig {
    let n = [64usize, 128, 256][rng.random_range(0..3)];
    let dy = rng.random_range(5e-6..2e-5);
    let wavelength = rng.random_range(4e-7..9e-7);
    let critical = n as f64 * dy * dy / wavelength;
    let extent = n as f64 * dy;
    let sigma_minus = rng.random_range(4.0..8.0) * dy;
    let sigma_plus = rng.random_range(sigma_minus..extent / 8.0);
    let slit_width = rng.random_range(4.0..8.0) * dy;
    let slit_separation = slit_width + rng.random_range(4.0..12.0) * dy;
    let focal = rng.random_range(0.3..0.95) * critical;
    let pinhole_radius = rng.random_range(2.0..6.0) * dy;
    ExperimentConfig {
        n,
        dy,
        sigma_plus,
        sigma_minus,
        y0: rng.random_range(-3.0..3.0) * dy,
        theta: rng.random_range(-1.0..1.0) * pinhole_radius / focal,
        focal,
        pinhole_radius,
        aperture_radius: (rng.random_range(0.3..0.9) * focal / critical * extent / 2.0).max(4.0 * dy),
        slit_separation,
        slit_width,
        screen_distance: rng.random_range(0.2..0.95) * critical,
        wavelength,
        ..Default::default()
    }
}

pub fn random_configs(seed: u64, count: usize) -> Vec<ExperimentConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_config(&mut rng)).collect()
}

/// Well-sampled direction-filter geometry for the extinction check:
/// `Δ = λf/2R` spans several samples and `f·θ = 7h`.
pub struct FilterGeometry {
    pub grid: Grid,
    pub focal: f64,
    pub pinhole_radius: f64,
    pub aperture_radius: f64,
    pub theta: f64,
    pub wavelength: f64,
}

pub fn extinction_geometry() -> FilterGeometry {
    let focal = 0.16;
    let pinhole_radius = 150e-6;
    FilterGeometry {
        grid: Grid::new(1024, 10e-6).unwrap(),
        focal,
        pinhole_radius,
        aperture_radius: 1.5e-3,
        theta: 7.0 * pinhole_radius / focal,
        wavelength: LAMBDA,
    }
}

/// Half-width actually opened by a centered hard mask of nominal half-width
/// `r` on `grid`: the number of transmitting samples times `dy/2`.
pub fn sampled_halfwidth(grid: &Grid, r: f64) -> f64 {
    let open = grid.coords().iter().filter(|y| y.abs() <= r * (1.0 + 1e-12)).count();
    0.5 * open as f64 * grid.dy()
}

/// Power through the pinhole, relative to the power entering the aperture,
/// for a unit plane wave meeting the filter axis at `incidence`.
///
/// Both stages are direct quadratures of the Fresnel integral: the field in
/// the lens's back focal plane is built from the full quadratic phases of
/// lens and propagation, then its intensity is integrated over the pinhole.
pub fn filter_transmission_oracle(g: &FilterGeometry, incidence: f64) -> f64 {
    let k = 2.0 * PI / g.wavelength;
    let f = g.focal;
    let r = sampled_halfwidth(&g.grid, g.aperture_radius);
    let h = sampled_halfwidth(&g.grid, g.pinhole_radius);
    let focal_field = |eta: f64| -> Complex64 {
        let u = simpson(
            |y: f64| {
                let phase = k * incidence * y - k * y * y / (2.0 * f) + k * (eta - y).powi(2) / (2.0 * f);
                Complex64::from_polar(1.0, phase)
            },
            -r,
            r,
            4000,
        );
        u / (g.wavelength * f).sqrt()
    };
    let through = simpson(|eta| focal_field(eta).norm_sqr(), -h, h, 600);
    through / (2.0 * r)
}

/// Intensity on a screen at `distance` behind two slits lit by a unit
/// plane wave, by quadrature of the Fresnel integral over each slit.
pub fn double_slit_oracle(y: f64, separation: f64, width: f64, distance: f64, wavelength: f64) -> f64 {
    let k = 2.0 * PI / wavelength;
    let slit = |c: f64| {
        simpson(
            |x: f64| Complex64::from_polar(1.0, k * (y - x).powi(2) / (2.0 * distance)),
            c - 0.5 * width,
            c + 0.5 * width,
            800,
        )
    };
    (slit(0.5 * separation) + slit(-0.5 * separation)).norm_sqr() / (wavelength * distance)
}

/// Either an EPR state with random widths or arbitrary complex amplitudes,
/// on small grids that may differ between the two photons.
pub fn random_state(rng: &mut ChaCha8Rng) -> JointState {
    let na = [16usize, 32, 64][rng.random_range(0..3)];
    let nb = [16usize, 32, 64][rng.random_range(0..3)];
    let ga = Grid::new(na, rng.random_range(1e-6..1e-4)).unwrap();
    let gb = Grid::new(nb, rng.random_range(1e-6..1e-4)).unwrap();
    if rng.random_bool(0.5) && na == nb && ga.dy() == gb.dy() {
        let dy = ga.dy();
        let sm = rng.random_range(4.0..6.0) * dy;
        let sp = rng.random_range(sm..ga.extent() / 8.0);
        return build_epr_state(ga, gb, sp, sm, rng.random_range(-3.0..3.0) * dy).unwrap();
    }
    let amp = (0..na * nb)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    JointState::from_amplitudes(ga, gb, amp).unwrap()
}

/// Pearson statistic of `hits` against `p`, merging adjacent screen samples
/// until each merged bin expects at least five counts.
pub fn chi_square(p: &Pattern, hits: &[f64]) -> (f64, usize) {
    let g = p.grid;
    let mut counts = vec![0u64; g.n()];
    for &y in hits {
        let i = ((y - g.coord(0)) / g.dy() + 0.5).floor() as usize;
        counts[i.min(g.n() - 1)] += 1;
    }
    let scale = hits.len() as f64 / p.intensity.iter().sum::<f64>();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut e, mut o) = (0.0, 0.0);
    for (x, &c) in p.intensity.iter().zip(&counts) {
        e += x * scale;
        o += c as f64;
        if e >= 5.0 {
            bins.push((e, o));
            e = 0.0;
            o = 0.0;
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += e;
        last.1 += o;
    }
    let stat = bins.iter().map(|(e, o)| (o - e).powi(2) / e).sum();
    (stat, bins.len() - 1)
}

//! Sampled one-photon wavefunctions and their transverse-momentum spectra.
//!
//! Amplitudes carry units of m^(-1/2) so that `Σ|amp|²·dy` is a probability.
//! The transform pair approximates the continuous unitary Fourier transform
//!
//! ```text
//! S(k) = (2π)^(-1/2) ∫ f(y) e^{-iky} dy
//! ```
//!
//! on the centered lattices of [`Grid`], which makes it exactly unitary in the
//! discrete sense: `Σ|S|²·dk = Σ|f|²·dy`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::Grid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place centered DFT: sample index `n/2` is the origin in both domains.
/// Unnormalized, `Σ x_m e^{∓2πi (j-n/2)(m-n/2)/n}`.
pub(crate) fn centered_dft(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    // For even n the centering shift is a rotation by n/2 in either direction.
    data.rotate_left(n / 2);
    fft.process(data);
    data.rotate_left(n / 2);
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    amp: Vec<Complex64>,
}

/// Transverse-momentum representation of a [`Field`], indexed by
/// `k = (j - n/2)·dk`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    amp: Vec<Complex64>,
}

fn check_amplitudes(grid: &Grid, amp: &[Complex64]) -> Result<()> {
    if amp.len() != grid.n() {
        return Err(Error::LengthMismatch {
            expected: grid.n(),
            actual: amp.len(),
        });
    }
    if amp.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

impl Field {
    pub fn new(grid: Grid, amp: Vec<Complex64>) -> Result<Self> {
        check_amplitudes(&grid, &amp)?;
        Ok(Self { grid, amp })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            amp: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let amp = (0..grid.n()).map(|i| f(grid.coord(i))).collect();
        Self::new(grid, amp)
    }

    /// Unit-norm Gaussian whose intensity `|amp|²` has standard deviation `sigma`.
    pub fn gaussian(grid: Grid, center: f64, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::param("gaussian width", "must be positive"));
        }
        Self::from_fn(grid, |y| {
            let u = (y - center) / sigma;
            Complex64::new((-0.25 * u * u).exp(), 0.0)
        })?
        .normalized()
    }

    /// Unit-norm plane wave travelling at `angle` (radians, paraxial) to the
    /// optical axis, filling the whole window.
    pub fn plane_wave(grid: Grid, angle: f64, wavelength: f64) -> Result<Self> {
        let k = 2.0 * PI / wavelength;
        Self::from_fn(grid, |y| Complex64::from_polar(1.0, k * angle * y))?.normalized()
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn into_amp(self) -> Vec<Complex64> {
        self.amp
    }

    /// `Σ|amp|²·dy`.
    pub fn norm2(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dy()
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            amp: self.amp.iter().map(|a| a * c).collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm2();
        if n <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(Complex64::new(1.0 / n.sqrt(), 0.0)))
    }

    /// Pointwise product with a transmission/phase profile sampled at `y`.
    pub fn map_pointwise(&self, f: impl Fn(f64) -> Complex64) -> Self {
        let amp = self
            .amp
            .iter()
            .enumerate()
            .map(|(i, a)| a * f(self.grid.coord(i)))
            .collect();
        Self {
            grid: self.grid,
            amp,
        }
    }

    pub fn to_spectrum(&self) -> Spectrum {
        let mut amp = self.amp.clone();
        centered_dft(&mut amp, false);
        let c = self.grid.dy() / (2.0 * PI).sqrt();
        amp.iter_mut().for_each(|a| *a *= c);
        Spectrum {
            grid: self.grid,
            amp,
        }
    }

    /// Relative L2 distance `‖self − other‖ / ‖other‖`.
    pub fn relative_l2(&self, other: &Field) -> f64 {
        let num: f64 = self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = other.amp.iter().map(|b| b.norm_sqr()).sum();
        (num / den).sqrt()
    }
}

impl Spectrum {
    pub fn new(grid: Grid, amp: Vec<Complex64>) -> Result<Self> {
        check_amplitudes(&grid, &amp)?;
        Ok(Self { grid, amp })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    /// `Σ|amp|²·dk`.
    pub fn norm2(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dk()
    }

    /// Intensity-weighted mean wavenumber.
    pub fn centroid(&self) -> f64 {
        let (num, den) = self
            .amp
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(num, den), (j, a)| {
                let p = a.norm_sqr();
                (num + p * self.grid.wavenumber(j), den + p)
            });
        num / den
    }

    /// Multiply by a transfer function of `k`.
    pub fn map_pointwise(&self, h: impl Fn(f64) -> Complex64) -> Self {
        let amp = self
            .amp
            .iter()
            .enumerate()
            .map(|(j, a)| a * h(self.grid.wavenumber(j)))
            .collect();
        Self {
            grid: self.grid,
            amp,
        }
    }

    pub fn to_field(&self) -> Field {
        let mut amp = self.amp.clone();
        centered_dft(&mut amp, true);
        let c = self.grid.dk() / (2.0 * PI).sqrt();
        amp.iter_mut().for_each(|a| *a *= c);
        Field {
            grid: self.grid,
            amp,
        }
    }
}

impl Add for &Field {
    type Output = Field;

    fn add(self, rhs: &Field) -> Field {
        assert_eq!(self.grid, rhs.grid, "adding fields on different grids");
        Field {
            grid: self.grid,
            amp: self.amp.iter().zip(&rhs.amp).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul<&Field> for Complex64 {
    type Output = Field;

    fn mul(self, rhs: &Field) -> Field {
        rhs.scale(self)
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::state::{check_epr_params, Basis};

/// What Bob's photon comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Regularized EPR pair.
    Epr,
    /// Uncorrelated pair: Bob receives a plane wave at `source_angle`.
    PlaneWave,
}

/// Every parameter of one run. Lengths in meters, angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub dy: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
    pub y0: f64,
    /// Inclination of the filter axis to the lab axis.
    pub theta: f64,
    pub focal: f64,
    pub pinhole_radius: f64,
    pub aperture_radius: f64,
    pub slit_separation: f64,
    pub slit_width: f64,
    pub screen_distance: f64,
    pub wavelength: f64,
    /// `None`: Alice does nothing and Bob's state is the partial trace.
    pub alice_basis: Option<Basis>,
    pub source: Source,
    pub source_angle: f64,
    pub n_photons: u64,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    /// Desk-scale HeNe setup on a 1024-point, 10 µm grid.
    ///
    /// Both focal distances and the screen distance stay below the critical
    /// distance `n·dy²/λ ≈ 0.162 m`, so every free-space step is sampled
    /// without aliasing. The filter axis sits near one standard deviation of
    /// Bob's angular spread and `f·θ = 8h`.
    fn default() -> Self {
        Self {
            n: 1024,
            dy: 10e-6,
            sigma_plus: 0.8e-3,
            sigma_minus: 50e-6,
            y0: 0.0,
            theta: 1.5e-3,
            focal: 0.16,
            pinhole_radius: 30e-6,
            aperture_radius: 4e-3,
            slit_separation: 200e-6,
            slit_width: 50e-6,
            screen_distance: 0.15,
            wavelength: 633e-9,
            alice_basis: None,
            source: Source::Epr,
            source_angle: 0.0,
            n_photons: 100_000,
            seed: 1,
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} must be positive")))
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} must be finite")))
    }
}

impl ExperimentConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.dy)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        positive("wavelength", self.wavelength)?;
        positive("focal length", self.focal)?;
        positive("pinhole radius", self.pinhole_radius)?;
        positive("aperture radius", self.aperture_radius)?;
        positive("slit width", self.slit_width)?;
        positive("slit separation", self.slit_separation)?;
        positive("screen distance", self.screen_distance)?;
        finite("filter angle", self.theta)?;
        finite("source angle", self.source_angle)?;
        if self.slit_separation <= self.slit_width {
            return Err(Error::param(
                "slit separation",
                format!(
                    "{} must exceed the slit width {}",
                    self.slit_separation, self.slit_width
                ),
            ));
        }
        check_epr_params(&grid, &grid, self.sigma_plus, self.sigma_minus, self.y0)
    }

    /// Fringe period `λ·L/s` expected on the screen.
    pub fn fringe_period(&self) -> f64 {
        self.wavelength * self.screen_distance / self.slit_separation
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }
}

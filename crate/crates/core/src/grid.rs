use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform, zero-centered sampling lattice for one transverse coordinate.
///
/// Sample `i` sits at `(i - n/2) * dy`; the conjugate wavenumber lattice uses
/// the same centering with spacing `dk = 2π / (n dy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    dy: f64,
}

impl Grid {
    pub fn new(n: usize, dy: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "sample count {n} must be a power of two and at least 8"
            )));
        }
        if !(dy.is_finite() && dy > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing {dy} must be positive and finite"
            )));
        }
        Ok(Self { n, dy })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        self.dy
    }

    /// Conjugate (wavenumber) spacing in rad/m.
    #[inline]
    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dy)
    }

    /// Full width `n * dy` of the (periodic) window.
    #[inline]
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.dy
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.dy
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    #[inline]
    pub fn wavenumber(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.dk()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.wavenumber(j)).collect()
    }

    /// Nearest sample index to `y`, or `None` outside the window.
    pub fn index_of(&self, y: f64) -> Option<usize> {
        let i = (y / self.dy).round() + (self.n / 2) as f64;
        (i >= 0.0 && i < self.n as f64).then_some(i as usize)
    }

    /// Largest `|y|` represented on the grid.
    pub fn half_extent(&self) -> f64 {
        (self.n / 2) as f64 * self.dy
    }
}

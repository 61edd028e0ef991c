use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;

/// Bob's (possibly mixed) transverse state `ρ(y_b, y_b′)`, stored row-major.
///
/// Normalization: `tr(ρ)·dy = 1` for a state straight from the source.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    grid: Grid,
    rho: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn new(grid: Grid, rho: Vec<Complex64>) -> Result<Self> {
        let n = grid.n();
        if rho.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: rho.len(),
            });
        }
        if rho.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, rho })
    }

    pub(crate) fn from_raw(grid: Grid, rho: Vec<Complex64>) -> Self {
        debug_assert_eq!(rho.len(), grid.n() * grid.n());
        Self { grid, rho }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &Field) -> Self {
        let a = psi.amp();
        let n = a.len();
        let mut rho = Vec::with_capacity(n * n);
        for x in a {
            rho.extend(a.iter().map(|y| x * y.conj()));
        }
        Self {
            grid: *psi.grid(),
            rho,
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn get(&self, b: usize, bp: usize) -> Complex64 {
        self.rho[b * self.grid.n() + bp]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.rho
    }

    /// Column `bp` as a contiguous vector.
    pub fn column(&self, bp: usize) -> Vec<Complex64> {
        let n = self.grid.n();
        (0..n).map(|b| self.rho[b * n + bp]).collect()
    }

    /// `Σ ρ(y,y)` times `dy` (probability per meter on the diagonal).
    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum::<f64>() * self.grid.dy()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let n = self.grid.n();
        (0..n).map(|i| self.rho[i * n + i].re).collect()
    }

    /// `tr(ρ²)·dy²`; 1 for a normalized pure state.
    pub fn purity(&self) -> f64 {
        let dy = self.grid.dy();
        self.rho.iter().map(|a| a.norm_sqr()).sum::<f64>() * dy * dy
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.grid.n();
        let mut worst: f64 = 0.0;
        for b in 0..n {
            for bp in b..n {
                let d = self.rho[b * n + bp] - self.rho[bp * n + b].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Largest element-wise difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the operator `ρ·dy` (so they sum to the trace), ascending.
    /// Dense Hermitian eigensolve; intended for diagnostics on modest grids.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.grid.n();
        let dy = self.grid.dy();
        let m = DMatrix::from_fn(n, n, |i, j| self.rho[i * n + j] * dy);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

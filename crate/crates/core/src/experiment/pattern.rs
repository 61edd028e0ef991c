use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::optics::{apply_train, OpticalTrain};

/// Probability density of detections across Bob's screen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    pub grid: Grid,
    /// Per meter of screen.
    pub intensity: Vec<f64>,
    /// `Σ intensity·dy`: fraction of source photons reaching the screen.
    pub total_weight: f64,
}

impl Pattern {
    pub fn new(grid: Grid, intensity: Vec<f64>) -> Result<Self> {
        if intensity.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                actual: intensity.len(),
            });
        }
        if intensity.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if intensity.iter().any(|&x| x < 0.0) {
            return Err(Error::param("intensity", "must be non-negative"));
        }
        let total_weight = intensity.iter().sum::<f64>() * grid.dy();
        Ok(Self {
            grid,
            intensity,
            total_weight,
        })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            intensity: vec![0.0; grid.n()],
            total_weight: 0.0,
        }
    }

    /// `Σ w_i p_i`, accumulated in the given order.
    pub fn mixture<'a>(grid: Grid, parts: impl IntoIterator<Item = (f64, &'a Pattern)>) -> Result<Self> {
        let mut intensity = vec![0.0; grid.n()];
        for (w, p) in parts {
            if p.grid != grid {
                return Err(Error::GridMismatch);
            }
            for (acc, x) in intensity.iter_mut().zip(&p.intensity) {
                *acc += w * x;
            }
        }
        Self::new(grid, intensity)
    }

    /// Same shape, unit total weight.
    pub fn normalized(&self) -> Result<Self> {
        if self.total_weight.is_nan() || self.total_weight <= 0.0 {
            return Err(Error::ZeroPattern);
        }
        let c = 1.0 / self.total_weight;
        Self::new(self.grid, self.intensity.iter().map(|x| x * c).collect())
    }

    /// `∫|p - q| dy`.
    pub fn l1(&self, other: &Pattern) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .intensity
            .iter()
            .zip(&other.intensity)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * self.grid.dy())
    }

    /// `max|p - q|`, per meter.
    pub fn linf(&self, other: &Pattern) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .intensity
            .iter()
            .zip(&other.intensity)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Screen pattern of one pure state, per unit input probability.
pub fn pattern_from_pure(psi: &Field, train: &OpticalTrain) -> Result<Pattern> {
    let n_in = psi.norm2();
    if n_in == 0.0 {
        return Ok(Pattern::zeros(*psi.grid()));
    }
    let (out, _) = apply_train(psi, train)?;
    let c = 1.0 / n_in;
    Pattern::new(*psi.grid(), out.amp().iter().map(|a| a.norm_sqr() * c).collect())
}

fn push_columns(grid: Grid, cols: Vec<Vec<Complex64>>, train: &OpticalTrain) -> Result<Vec<Vec<Complex64>>> {
    let zero = Complex64::new(0.0, 0.0);
    cols.into_par_iter()
        .map(|c| {
            if c.iter().all(|x| *x == zero) {
                return Ok(c);
            }
            Ok(apply_train(&Field::new(grid, c)?, train)?.0.into_amp())
        })
        .collect()
}

/// Diagonal of `MρM†` with `M` the train operator. No renormalization: the
/// total weight is the flux that survives the lossy elements.
pub fn pattern_from_density(rho: &DensityMatrix, train: &OpticalTrain) -> Result<Pattern> {
    let grid = *rho.grid();
    let n = grid.n();
    // A = Mρ, column by column; cols[j][i] = A(i, j).
    let a = push_columns(grid, (0..n).map(|j| rho.column(j)).collect(), train)?;
    // B = M A†; column i of A† is the conjugated row i of A.
    let a_dag: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| a.iter().map(|col| col[i].conj()).collect())
        .collect();
    drop(a);
    let b = push_columns(grid, a_dag, train)?;
    // (MρM†)(i, i) = conj(B(i, i)).
    let intensity = (0..n).map(|i| b[i][i].re.max(0.0)).collect();
    Pattern::new(grid, intensity)
}

fn in_window(grid: &Grid, window: (f64, f64)) -> Result<std::ops::Range<usize>> {
    let (lo, hi) = window;
    let edge = grid.half_extent();
    if lo.is_nan() || hi.is_nan() || lo >= hi || lo < -edge || hi > edge {
        return Err(Error::param(
            "visibility window",
            format!("[{lo}, {hi}] must be a nonempty interval inside ±{edge}"),
        ));
    }
    let first = (0..grid.n()).find(|&i| grid.coord(i) >= lo).unwrap_or(grid.n());
    let last = (0..grid.n()).rev().find(|&i| grid.coord(i) <= hi).map_or(0, |i| i + 1);
    Ok(first..last.max(first))
}

/// Vertex of the parabola through three equally spaced samples, as an
/// offset in samples from the middle one and the value there.
fn vertex(a: f64, b: f64, c: f64) -> (f64, f64) {
    let curv = a - 2.0 * b + c;
    if curv == 0.0 {
        return (0.0, b);
    }
    let off = (0.5 * (a - c) / curv).clamp(-0.5, 0.5);
    (off, b - 0.25 * (a - c) * off)
}

fn is_min(x: &[f64], i: usize) -> bool {
    x[i] < x[i - 1] && x[i] <= x[i + 1]
}

fn is_max(x: &[f64], i: usize) -> bool {
    x[i] > x[i - 1] && x[i] >= x[i + 1]
}

/// Interpolated local minima inside the window: (position, value).
fn minima(p: &Pattern, range: std::ops::Range<usize>) -> Vec<(usize, f64, f64)> {
    let x = &p.intensity;
    let n = x.len();
    range
        .filter(|&i| i > 0 && i + 1 < n && is_min(x, i))
        .map(|i| {
            let (off, v) = vertex(x[i - 1], x[i], x[i + 1]);
            (i, p.grid.coord(i) + off * p.grid.dy(), v.max(0.0))
        })
        .collect()
}

fn neighbouring_max(x: &[f64], from: usize, step: isize) -> Option<f64> {
    let n = x.len() as isize;
    let mut i = from as isize + step;
    while i > 0 && i + 1 < n {
        let u = i as usize;
        if is_max(x, u) {
            return Some(vertex(x[u - 1], x[u], x[u + 1]).1);
        }
        i += step;
    }
    None
}

/// Fringe visibility over `window` (meters).
///
/// Each local minimum is compared with the mean of the two maxima that
/// flank it, which removes a slowly varying envelope; the result is the mean
/// over all minima in the window. A pattern without minima there has
/// visibility 0.
pub fn fringe_visibility(p: &Pattern, window: (f64, f64)) -> Result<f64> {
    let range = in_window(&p.grid, window)?;
    if p.intensity[range.clone()].iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroPattern);
    }
    let mut vs = Vec::new();
    for (i, _, lo) in minima(p, range) {
        let (Some(l), Some(r)) = (
            neighbouring_max(&p.intensity, i, -1),
            neighbouring_max(&p.intensity, i, 1),
        ) else {
            continue;
        };
        let hi = 0.5 * (l + r);
        if hi + lo > 0.0 {
            vs.push(((hi - lo) / (hi + lo)).clamp(0.0, 1.0));
        }
    }
    if vs.is_empty() {
        return Ok(0.0);
    }
    Ok(vs.iter().sum::<f64>() / vs.len() as f64)
}

/// Mean distance between consecutive interpolated minima inside `window`,
/// or `None` with fewer than two minima.
pub fn fringe_spacing(p: &Pattern, window: (f64, f64)) -> Result<Option<f64>> {
    let range = in_window(&p.grid, window)?;
    let m = minima(p, range);
    if m.len() < 2 {
        return Ok(None);
    }
    Ok(Some((m[m.len() - 1].1 - m[0].1) / (m.len() - 1) as f64))
}

//! The two-photon transverse state and Alice's measurements on it.
//!
//! The ideal EPR amplitude is a delta in the relative coordinate and a plane
//! wave in the centre of mass; it is not normalizable. We use the two-width
//! Gaussian
//!
//! ```text
//! Ψ(y_a, y_b) ∝ exp(-(y_a + y_b - y0)² / 4σ₊²) · exp(-(y_a - y_b + y0)² / 4σ₋²)
//! ```
//!
//! so that `y_a + y_b` has spread `σ₊`, `y_a - y_b` has spread `σ₋`, and Bob's
//! photon sits at `y_b ≈ y_a + y0`. The ideal state is the `σ₋ → 0, σ₊ → ∞`
//! limit.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::field::{centered_dft, Field};
use crate::gram::{gram, Rows};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EprParams {
    pub sigma_plus: f64,
    pub sigma_minus: f64,
    pub y0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    grid_a: Grid,
    grid_b: Grid,
    /// Row-major, `amp[a * n_b + b] = Ψ(y_a, y_b)`.
    amp: Vec<Complex64>,
    params: Option<EprParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Position,
    Momentum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub weight: f64,
    /// Alice's outcome: `y_a` in meters or `k_a` in rad/m.
    pub outcome: f64,
    /// Bob's conditional state, unit norm.
    pub state: Field,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEnsemble {
    pub basis: Basis,
    pub members: Vec<Member>,
}

pub fn build_epr_state(
    grid_a: Grid,
    grid_b: Grid,
    sigma_plus: f64,
    sigma_minus: f64,
    y0: f64,
) -> Result<JointState> {
    check_epr_params(&grid_a, &grid_b, sigma_plus, sigma_minus, y0)?;
    let (na, nb) = (grid_a.n(), grid_b.n());
    let cp = 1.0 / (4.0 * sigma_plus * sigma_plus);
    let cm = 1.0 / (4.0 * sigma_minus * sigma_minus);
    let yb = grid_b.coords();
    let mut amp = Vec::with_capacity(na * nb);
    for a in 0..na {
        let ya = grid_a.coord(a);
        amp.extend(yb.iter().map(|&yb| {
            let u = ya + yb - y0;
            let v = ya - yb + y0;
            Complex64::new((-cp * u * u - cm * v * v).exp(), 0.0)
        }));
    }
    let mut state = JointState {
        grid_a,
        grid_b,
        amp,
        params: Some(EprParams {
            sigma_plus,
            sigma_minus,
            y0,
        }),
    };
    state.normalize()?;
    Ok(state)
}

/// Resolution and containment requirements of [`build_epr_state`].
pub fn check_epr_params(
    grid_a: &Grid,
    grid_b: &Grid,
    sigma_plus: f64,
    sigma_minus: f64,
    y0: f64,
) -> Result<()> {
    if !(sigma_minus.is_finite() && sigma_minus > 0.0) {
        return Err(Error::param("relative-coordinate width", "must be positive"));
    }
    if !(sigma_plus.is_finite() && sigma_plus >= sigma_minus) {
        return Err(Error::param(
            "centre-of-mass width",
            format!("{sigma_plus} must be at least the relative width {sigma_minus}"),
        ));
    }
    if !y0.is_finite() {
        return Err(Error::param("transverse offset", "must be finite"));
    }
    let dy = grid_a.dy().max(grid_b.dy());
    if sigma_minus < 4.0 * dy {
        return Err(Error::param(
            "relative-coordinate width",
            format!("{sigma_minus} is under-resolved; need at least 4 samples ({})", 4.0 * dy),
        ));
    }
    let extent = grid_a.extent().min(grid_b.extent());
    if sigma_plus > extent / 8.0 {
        return Err(Error::param(
            "centre-of-mass width",
            format!("{sigma_plus} is not contained; must be at most extent/8 = {}", extent / 8.0),
        ));
    }
    Ok(())
}

impl JointState {
    /// Arbitrary amplitudes, normalized on construction.
    pub fn from_amplitudes(grid_a: Grid, grid_b: Grid, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != grid_a.n() * grid_b.n() {
            return Err(Error::LengthMismatch {
                expected: grid_a.n() * grid_b.n(),
                actual: amp.len(),
            });
        }
        if amp.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        let mut s = Self {
            grid_a,
            grid_b,
            amp,
            params: None,
        };
        s.normalize()?;
        Ok(s)
    }

    /// Uncorrelated pair `ψ_a(y_a)·ψ_b(y_b)`.
    pub fn product(alice: &Field, bob: &Field) -> Result<Self> {
        let mut amp = Vec::with_capacity(alice.amp().len() * bob.amp().len());
        for x in alice.amp() {
            amp.extend(bob.amp().iter().map(|y| x * y));
        }
        Self::from_amplitudes(*alice.grid(), *bob.grid(), amp)
    }

    fn normalize(&mut self) -> Result<()> {
        let n = self.norm2();
        if n.is_nan() || n <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let c = 1.0 / n.sqrt();
        self.amp.iter_mut().for_each(|a| *a *= c);
        Ok(())
    }

    pub fn grid_a(&self) -> &Grid {
        &self.grid_a
    }

    pub fn grid_b(&self) -> &Grid {
        &self.grid_b
    }

    pub fn params(&self) -> Option<&EprParams> {
        self.params.as_ref()
    }

    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.amp[a * self.grid_b.n() + b]
    }

    fn row(&self, a: usize) -> &[Complex64] {
        let nb = self.grid_b.n();
        &self.amp[a * nb..(a + 1) * nb]
    }

    /// `ΣΣ|Ψ|²·dy_a·dy_b`.
    pub fn norm2(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid_a.dy() * self.grid_b.dy()
    }

    /// `Ψ̃(k_a, y_b)`: unitary transform along Alice's axis, row-major in `k_a`.
    pub fn alice_spectrum(&self) -> Vec<Complex64> {
        let (na, nb) = (self.grid_a.n(), self.grid_b.n());
        let c = self.grid_a.dy() / (2.0 * PI).sqrt();
        let mut out = vec![Complex64::new(0.0, 0.0); na * nb];
        let mut col = vec![Complex64::new(0.0, 0.0); na];
        for b in 0..nb {
            for (a, x) in col.iter_mut().enumerate() {
                *x = self.amp[a * nb + b];
            }
            centered_dft(&mut col, false);
            for (j, x) in col.iter().enumerate() {
                out[j * nb + b] = x * c;
            }
        }
        out
    }

    /// `|Ψ̃(k_a, k_b)|²` row-major in `k_a`, as probability per (rad/m)².
    pub fn joint_spectral_density(&self) -> Vec<f64> {
        let nb = self.grid_b.n();
        let c = self.grid_b.dy() / (2.0 * PI).sqrt();
        let mut half = self.alice_spectrum();
        for row in half.chunks_mut(nb) {
            centered_dft(row, false);
            row.iter_mut().for_each(|x| *x *= c);
        }
        half.iter().map(|x| x.norm_sqr()).collect()
    }
}

/// `ρ_B(y_b, y_b′) = Σ_a Ψ(y_a, y_b) Ψ*(y_a, y_b′) dy_a`.
pub fn reduce_to_bob(j: &JointState) -> DensityMatrix {
    let dya = j.grid_a.dy();
    let rows = Rows {
        len: j.grid_b.n(),
        rows: (0..j.grid_a.n()).map(|a| (j.row(a), dya)).collect(),
    };
    DensityMatrix::from_raw(j.grid_b, gram(&rows))
}

fn members_from_rows(
    rows: impl Iterator<Item = (f64, Vec<Complex64>)>,
    grid_b: Grid,
    outcome_step: f64,
) -> Result<Vec<Member>> {
    let dyb = grid_b.dy();
    let mut members = Vec::new();
    for (outcome, row) in rows {
        let s: f64 = row.iter().map(|a| a.norm_sqr()).sum::<f64>() * dyb;
        if s == 0.0 {
            continue;
        }
        let c = 1.0 / s.sqrt();
        let state = Field::new(grid_b, row.into_iter().map(|a| a * c).collect())?;
        members.push(Member {
            weight: s * outcome_step,
            outcome,
            state,
        });
    }
    Ok(members)
}

/// Alice resolves `y_a` to one grid sample. Outcome `y_i` occurs with
/// probability `Σ_b |Ψ(y_i, y_b)|² dy_b · dy_a` and leaves Bob in
/// `Ψ(y_i, ·)` renormalized. Zero-probability outcomes are omitted.
pub fn alice_measure_position(j: &JointState) -> Result<ConditionalEnsemble> {
    let rows = (0..j.grid_a.n()).map(|a| (j.grid_a.coord(a), j.row(a).to_vec()));
    Ok(ConditionalEnsemble {
        basis: Basis::Position,
        members: members_from_rows(rows, j.grid_b, j.grid_a.dy())?,
    })
}

/// Alice resolves `k_a` to one spectral bin; Bob is left in `Ψ̃(k_j, ·)`
/// renormalized.
pub fn alice_measure_momentum(j: &JointState) -> Result<ConditionalEnsemble> {
    let nb = j.grid_b.n();
    let spec = j.alice_spectrum();
    let rows = spec
        .chunks(nb)
        .enumerate()
        .map(|(k, row)| (j.grid_a.wavenumber(k), row.to_vec()));
    Ok(ConditionalEnsemble {
        basis: Basis::Momentum,
        members: members_from_rows(rows, j.grid_b, j.grid_a.dk())?,
    })
}

pub fn alice_measure(j: &JointState, basis: Basis) -> Result<ConditionalEnsemble> {
    match basis {
        Basis::Position => alice_measure_position(j),
        Basis::Momentum => alice_measure_momentum(j),
    }
}

/// `Σ_i w_i |ψ_i⟩⟨ψ_i|`.
pub fn ensemble_to_density(e: &ConditionalEnsemble) -> Result<DensityMatrix> {
    let grid = match e.members.first() {
        Some(m) => *m.state.grid(),
        None => return Err(Error::ZeroNorm),
    };
    if e.members.iter().any(|m| *m.state.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    let rows = Rows {
        len: grid.n(),
        rows: e.members.iter().map(|m| (m.state.amp(), m.weight)).collect(),
    };
    Ok(DensityMatrix::from_raw(grid, gram(&rows)))
}

impl ConditionalEnsemble {
    pub fn total_weight(&self) -> f64 {
        self.members.iter().map(|m| m.weight).sum()
    }
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Closed-form purity of Bob's reduced state for the two-width Gaussian.
pub fn gaussian_purity(sigma_plus: f64, sigma_minus: f64) -> f64 {
    2.0 * sigma_plus * sigma_minus / (sigma_plus * sigma_plus + sigma_minus * sigma_minus)
}

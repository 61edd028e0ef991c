//! Bob's apparatus, the screen patterns it produces, and the comparison of
//! those patterns across Alice's choices.

mod config;
mod detect;
mod pattern;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{ExperimentConfig, Source};
pub use detect::{monte_carlo_detect, DetectionRecord};
pub use pattern::{fringe_spacing, fringe_visibility, pattern_from_density, pattern_from_pure, Pattern};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::optics::{filter_validity, Element, FilterValidity, OpticalTrain};
use crate::sampling::{validate_sampling, SamplingReport};
use crate::state::{
    alice_measure, build_epr_state, ensemble_to_density, reduce_to_bob, Basis, ConditionalEnsemble, JointState,
    Member,
};

/// Direction filter, double slit and screen, with the filter's validity
/// report. The train is built even when the report flags a failure.
pub fn bob_train(cfg: &ExperimentConfig) -> Result<(OpticalTrain, FilterValidity)> {
    let train = OpticalTrain::new(
        vec![
            Element::Tilt { angle: cfg.theta },
            Element::BlockOutsideAperture {
                radius: cfg.aperture_radius,
            },
            Element::Lens { focal: cfg.focal },
            Element::FreeSpace { distance: cfg.focal },
            Element::Pinhole {
                radius: cfg.pinhole_radius,
                center: 0.0,
            },
            Element::FreeSpace { distance: cfg.focal },
            Element::Lens { focal: cfg.focal },
            Element::DoubleSlit {
                separation: cfg.slit_separation,
                width: cfg.slit_width,
            },
            Element::FreeSpace {
                distance: cfg.screen_distance,
            },
        ],
        cfg.wavelength,
    )?;
    let validity = filter_validity(
        cfg.theta,
        cfg.focal,
        cfg.pinhole_radius,
        cfg.aperture_radius,
        cfg.slit_separation,
        cfg.wavelength,
    );
    Ok((train, validity))
}

/// Two-photon state emitted by the configured source.
pub fn source_state(cfg: &ExperimentConfig) -> Result<JointState> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    match cfg.source {
        Source::Epr => build_epr_state(grid, grid, cfg.sigma_plus, cfg.sigma_minus, cfg.y0),
        Source::PlaneWave => JointState::product(
            &Field::gaussian(grid, 0.0, cfg.sigma_plus)?,
            &Field::plane_wave(grid, cfg.source_angle, cfg.wavelength)?,
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoSignaling {
    /// `∫|p_pos - p_mom| dy`.
    pub l1: f64,
    /// Largest pointwise difference, per meter.
    pub linf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coincidences {
    /// Screen pattern given that Alice's outcome passed the filter, per unit
    /// selected probability.
    pub pattern: Pattern,
    /// Probability that Alice's outcome passes the filter.
    pub selected_weight: f64,
    pub n_selected: usize,
}

/// A mixture missing one member, compared with the true marginal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeControl {
    pub basis: Basis,
    pub dropped_outcome: f64,
    pub dropped_weight: f64,
    pub l1: f64,
}

/// A configured run: source, Bob's train and the associated diagnostics.
#[derive(Debug, Clone)]
pub struct Experiment {
    cfg: ExperimentConfig,
    grid: Grid,
    state: JointState,
    train: OpticalTrain,
    validity: FilterValidity,
    sampling: SamplingReport,
}

impl Experiment {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let state = source_state(cfg)?;
        let grid = cfg.grid()?;
        let (train, validity) = bob_train(cfg)?;
        let sampling = validate_sampling(&grid, &train);
        Ok(Self {
            cfg: cfg.clone(),
            grid,
            state,
            train,
            validity,
            sampling,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn state(&self) -> &JointState {
        &self.state
    }

    pub fn train(&self) -> &OpticalTrain {
        &self.train
    }

    pub fn validity(&self) -> &FilterValidity {
        &self.validity
    }

    pub fn sampling(&self) -> &SamplingReport {
        &self.sampling
    }

    pub fn reduced(&self) -> DensityMatrix {
        reduce_to_bob(&self.state)
    }

    pub fn ensemble(&self, basis: Basis) -> Result<ConditionalEnsemble> {
        alice_measure(&self.state, basis)
    }

    pub fn member_pattern(&self, m: &Member) -> Result<Pattern> {
        pattern_from_pure(&m.state, &self.train)
    }

    /// One pattern per member, in ensemble order.
    pub fn member_patterns(&self, e: &ConditionalEnsemble) -> Result<Vec<Pattern>> {
        e.members.par_iter().map(|m| self.member_pattern(m)).collect()
    }

    /// Weighted sum of member patterns.
    pub fn mixture_pattern(&self, e: &ConditionalEnsemble) -> Result<Pattern> {
        let patterns = self.member_patterns(e)?;
        Pattern::mixture(self.grid, e.members.iter().map(|m| m.weight).zip(&patterns))
    }

    /// Screen pattern pushed through the density-matrix path.
    pub fn density_pattern(&self, rho: &DensityMatrix) -> Result<Pattern> {
        pattern_from_density(rho, &self.train)
    }

    /// Bob's unconditional pattern. With no measurement by Alice it is the
    /// partial trace pushed through the train; otherwise the mixture of her
    /// conditional states.
    pub fn singles(&self, alice: Option<Basis>) -> Result<Pattern> {
        match alice {
            None => self.density_pattern(&self.reduced()),
            Some(b) => self.mixture_pattern(&self.ensemble(b)?),
        }
    }

    pub fn coincidences(&self, basis: Basis, keep: impl Fn(f64) -> bool + Sync) -> Result<Coincidences> {
        let e = self.ensemble(basis)?;
        let selected: Vec<&Member> = e.members.iter().filter(|m| keep(m.outcome)).collect();
        let selected_weight: f64 = selected.iter().map(|m| m.weight).sum();
        if selected.is_empty() || selected_weight.is_nan() || selected_weight <= 0.0 {
            return Err(Error::NoCoincidences);
        }
        let patterns: Vec<Pattern> = selected
            .par_iter()
            .map(|m| self.member_pattern(m))
            .collect::<Result<_>>()?;
        let pattern = Pattern::mixture(
            self.grid,
            selected.iter().map(|m| m.weight / selected_weight).zip(&patterns),
        )?;
        Ok(Coincidences {
            pattern,
            selected_weight,
            n_selected: selected.len(),
        })
    }

    /// Alice momenta whose partner photon travels within the filter's
    /// acceptance `h/f` of the filter axis: `|k_a + kθ| ≤ k·h/f`.
    pub fn momentum_window(&self) -> (f64, f64) {
        let k = self.cfg.wavenumber();
        let center = -k * self.cfg.theta;
        let half = k * self.cfg.pinhole_radius / self.cfg.focal;
        (center - half, center + half)
    }

    pub fn filtered_coincidences(&self) -> Result<Coincidences> {
        let (lo, hi) = self.momentum_window();
        self.coincidences(Basis::Momentum, |q| q >= lo && q <= hi)
    }

    /// Central three fringes, `±1.5·λL/s`, clipped to the grid.
    pub fn visibility_window(&self) -> (f64, f64) {
        let w = (1.5 * self.cfg.fringe_period()).min(self.grid.half_extent());
        (-w, w)
    }

    /// `±3·λL/s`, clipped to the grid.
    pub fn spacing_window(&self) -> (f64, f64) {
        let w = (3.0 * self.cfg.fringe_period()).min(self.grid.half_extent());
        (-w, w)
    }

    /// Singles patterns after a position versus a momentum measurement by
    /// Alice, both through the density-matrix path.
    pub fn no_signaling(&self) -> Result<NoSignaling> {
        let p = self.density_pattern(&ensemble_to_density(&self.ensemble(Basis::Position)?)?)?;
        let q = self.density_pattern(&ensemble_to_density(&self.ensemble(Basis::Momentum)?)?)?;
        Ok(NoSignaling {
            l1: p.l1(&q)?,
            linf: p.linf(&q)?,
        })
    }

    /// Drops the member that puts the most light on the screen and compares
    /// the remaining mixture with the partial-trace pattern. A comparator
    /// that cannot see this difference could not see signaling either.
    pub fn negative_control(&self, basis: Basis) -> Result<NegativeControl> {
        let mut e = self.ensemble(basis)?;
        let patterns = self.member_patterns(&e)?;
        let (drop, _) = e
            .members
            .iter()
            .zip(&patterns)
            .map(|(m, p)| m.weight * p.total_weight)
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, c)| if c > best.1 { (i, c) } else { best });
        let dropped = e.members.remove(drop);
        let corrupted = self.density_pattern(&ensemble_to_density(&e)?)?;
        let truth = self.density_pattern(&self.reduced())?;
        Ok(NegativeControl {
            basis,
            dropped_outcome: dropped.outcome,
            dropped_weight: dropped.weight,
            l1: corrupted.l1(&truth)?,
        })
    }
}

pub fn singles_pattern(cfg: &ExperimentConfig) -> Result<Pattern> {
    Experiment::new(cfg)?.singles(cfg.alice_basis)
}

/// Requires `cfg.alice_basis`; `keep` sees each outcome (`y_a` in meters or
/// `k_a` in rad/m).
pub fn coincidence_patterns(cfg: &ExperimentConfig, keep: impl Fn(f64) -> bool + Sync) -> Result<Coincidences> {
    let basis = cfg.alice_basis.ok_or(Error::BasisRequired("coincidence pattern"))?;
    Experiment::new(cfg)?.coincidences(basis, keep)
}

pub fn no_signaling_distance(cfg: &ExperimentConfig) -> Result<NoSignaling> {
    Experiment::new(cfg)?.no_signaling()
}

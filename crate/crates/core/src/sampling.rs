//! Aliasing guard for an optical train on a given grid.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use crate::optics::{Element, OpticalTrain};

/// Minimum number of samples across any mask feature.
pub const MIN_FEATURE_SAMPLES: f64 = 4.0;
/// Tilts beyond this are outside the paraxial regime.
pub const PARAXIAL_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SamplingIssue {
    /// Transfer-function phase changes by more than π between adjacent
    /// spectral samples at the band edge.
    AliasedFresnelKernel { phase_step: f64 },
    /// Lens chirp changes by more than π between adjacent samples at the edge
    /// of the illuminated region.
    AliasedLensPhase { phase_step: f64 },
    AliasedTiltRamp { phase_step: f64 },
    NonParaxialTilt { angle: f64 },
    UnderResolvedMask { feature: f64, samples: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingFlag {
    pub element: usize,
    #[serde(flatten)]
    pub issue: SamplingIssue,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SamplingReport {
    pub flags: Vec<SamplingFlag>,
}

impl SamplingReport {
    pub fn is_clean(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Edge phase step of the paraxial transfer function for distance `l`:
/// `k_max·dk·l/k` with `k_max = π/dy`, i.e. `π·l·λ/(n·dy²)`.
pub fn fresnel_phase_step(grid: &Grid, distance: f64, wavelength: f64) -> f64 {
    let k = 2.0 * PI / wavelength;
    (PI / grid.dy()) * grid.dk() * distance.abs() / k
}

fn under_resolved(feature: f64, dy: f64) -> Option<SamplingIssue> {
    let samples = feature / dy;
    (samples < MIN_FEATURE_SAMPLES).then_some(SamplingIssue::UnderResolvedMask { feature, samples })
}

/// Flags every element whose sampling on `grid` is questionable.
///
/// The lens chirp is judged over the half-width a mask has confined the beam
/// to. After free space that bound is lost and the lens is not checked: a
/// lens placed one focal length behind a pinhole removes the curvature that
/// propagation added, so the product stays smooth even where the chirp alone
/// would alias.
pub fn validate_sampling(grid: &Grid, train: &OpticalTrain) -> SamplingReport {
    let k = 2.0 * PI / train.wavelength;
    let dy = grid.dy();
    let mut flags = Vec::new();
    let mut flag = |element, issue: Option<SamplingIssue>| {
        if let Some(issue) = issue {
            flags.push(SamplingFlag { element, issue });
        }
    };

    let mut support = Some(grid.half_extent());
    for (i, e) in train.elements.iter().enumerate() {
        match *e {
            Element::FreeSpace { distance } => {
                let step = fresnel_phase_step(grid, distance, train.wavelength);
                flag(i, (step > PI).then_some(SamplingIssue::AliasedFresnelKernel { phase_step: step }));
                if distance > 0.0 {
                    support = None;
                }
            }
            Element::Lens { focal } => {
                if let Some(a) = support {
                    let step = k * a * dy / focal.abs();
                    flag(i, (step > PI).then_some(SamplingIssue::AliasedLensPhase { phase_step: step }));
                }
            }
            Element::Tilt { angle } => {
                let step = k * angle.abs() * dy;
                flag(i, (step > PI).then_some(SamplingIssue::AliasedTiltRamp { phase_step: step }));
                flag(i, (angle.abs() > PARAXIAL_LIMIT).then_some(SamplingIssue::NonParaxialTilt { angle }));
            }
            Element::HardAperture { halfwidth, center } => {
                flag(i, under_resolved(2.0 * halfwidth, dy));
                support = Some(support.unwrap_or(f64::INFINITY).min(center.abs() + halfwidth));
            }
            Element::Pinhole { radius, center } => {
                flag(i, under_resolved(2.0 * radius, dy));
                support = Some(support.unwrap_or(f64::INFINITY).min(center.abs() + radius));
            }
            Element::BlockOutsideAperture { radius } => {
                flag(i, under_resolved(2.0 * radius, dy));
                support = Some(support.unwrap_or(f64::INFINITY).min(radius));
            }
            Element::DoubleSlit { separation, width } => {
                flag(i, under_resolved(width, dy));
                flag(i, under_resolved(separation - width, dy));
                support = Some(support.unwrap_or(f64::INFINITY).min(0.5 * (separation + width)));
            }
        }
    }
    SamplingReport { flags }
}

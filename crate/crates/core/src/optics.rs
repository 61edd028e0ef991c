//! Thin elements and paraxial free-space propagation acting on [`Field`]s.
//!
//! Sign conventions: a plane wave travelling at angle `θ` to the axis is
//! `exp(+ikθy)`; a converging lens multiplies by `exp(-iky²/2f)`; free space
//! uses the angular-spectrum transfer function
//! `exp(ikL)·exp(-ik_y²L/2k)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Mask edges that land on a sample are counted as transmitting.
const EDGE_TOL: f64 = 1e-9;

/// Validity thresholds for the two "much less than" conditions of the filter.
pub const VALIDITY_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Element {
    Lens { focal: f64 },
    FreeSpace { distance: f64 },
    HardAperture { halfwidth: f64, center: f64 },
    /// Hard aperture placed in a focal plane.
    Pinhole { radius: f64, center: f64 },
    DoubleSlit { separation: f64, width: f64 },
    /// Frame change into an axis inclined at `angle` to the lab axis.
    Tilt { angle: f64 },
    /// Opaque enclosure around a centered entrance aperture.
    BlockOutsideAperture { radius: f64 },
}

impl Element {
    pub fn name(&self) -> &'static str {
        match self {
            Element::Lens { .. } => "lens",
            Element::FreeSpace { .. } => "free space",
            Element::HardAperture { .. } => "hard aperture",
            Element::Pinhole { .. } => "pinhole",
            Element::DoubleSlit { .. } => "double slit",
            Element::Tilt { .. } => "tilt",
            Element::BlockOutsideAperture { .. } => "entrance aperture",
        }
    }

    pub fn is_mask(&self) -> bool {
        matches!(
            self,
            Element::HardAperture { .. }
                | Element::Pinhole { .. }
                | Element::DoubleSlit { .. }
                | Element::BlockOutsideAperture { .. }
        )
    }

    pub fn is_phase_only(&self) -> bool {
        matches!(
            self,
            Element::Lens { .. } | Element::FreeSpace { .. } | Element::Tilt { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        let finite_pos = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("{v} must be positive and finite")))
            }
        };
        let finite = |name, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, "must be finite"))
            }
        };
        match *self {
            Element::Lens { focal } => {
                finite("focal length", focal)?;
                if focal == 0.0 {
                    return Err(Error::param("focal length", "must be nonzero"));
                }
                Ok(())
            }
            Element::FreeSpace { distance } => {
                finite("propagation distance", distance)?;
                if distance < 0.0 {
                    return Err(Error::param("propagation distance", "must be non-negative"));
                }
                Ok(())
            }
            Element::HardAperture { halfwidth, center } => {
                finite_pos("aperture halfwidth", halfwidth)?;
                finite("aperture center", center)
            }
            Element::Pinhole { radius, center } => {
                finite_pos("pinhole radius", radius)?;
                finite("pinhole center", center)
            }
            Element::DoubleSlit { separation, width } => {
                finite_pos("slit width", width)?;
                finite_pos("slit separation", separation)?;
                if separation <= width {
                    return Err(Error::param(
                        "slit separation",
                        format!("{separation} must exceed the slit width {width}"),
                    ));
                }
                Ok(())
            }
            Element::Tilt { angle } => finite("tilt angle", angle),
            Element::BlockOutsideAperture { radius } => finite_pos("entrance aperture radius", radius),
        }
    }

    /// 0/1 transmission at transverse position `y`; `None` for non-masks.
    fn transmits(&self, y: f64, dy: f64) -> Option<bool> {
        let tol = EDGE_TOL * dy;
        match *self {
            Element::HardAperture { halfwidth, center } => Some((y - center).abs() <= halfwidth + tol),
            Element::Pinhole { radius, center } => Some((y - center).abs() <= radius + tol),
            Element::BlockOutsideAperture { radius } => Some(y.abs() <= radius + tol),
            Element::DoubleSlit { separation, width } => {
                let h = 0.5 * width + tol;
                Some((y - 0.5 * separation).abs() <= h || (y + 0.5 * separation).abs() <= h)
            }
            _ => None,
        }
    }
}

/// Ordered elements plus the design wavelength they are evaluated at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalTrain {
    pub elements: Vec<Element>,
    pub wavelength: f64,
}

impl OpticalTrain {
    pub fn new(elements: Vec<Element>, wavelength: f64) -> Result<Self> {
        check_wavelength(wavelength)?;
        elements.iter().try_for_each(Element::validate)?;
        Ok(Self {
            elements,
            wavelength,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn check_wavelength(wavelength: f64) -> Result<()> {
    if wavelength.is_finite() && wavelength > 0.0 {
        Ok(())
    } else {
        Err(Error::param("wavelength", format!("{wavelength} must be positive")))
    }
}

#[inline]
fn wavenumber(wavelength: f64) -> f64 {
    2.0 * PI / wavelength
}

fn fraction(out: &Field, input: &Field) -> f64 {
    let n_in = input.norm2();
    if n_in > 0.0 {
        out.norm2() / n_in
    } else {
        0.0
    }
}

pub fn apply_lens(f: &Field, focal: f64, wavelength: f64) -> Result<Field> {
    check_wavelength(wavelength)?;
    Element::Lens { focal }.validate()?;
    let c = wavenumber(wavelength) / (2.0 * focal);
    Ok(f.map_pointwise(|y| Complex64::from_polar(1.0, -c * y * y)))
}

pub fn propagate(f: &Field, distance: f64, wavelength: f64) -> Result<Field> {
    check_wavelength(wavelength)?;
    Element::FreeSpace { distance }.validate()?;
    if distance == 0.0 {
        return Ok(f.clone());
    }
    let k = wavenumber(wavelength);
    let carrier = (k * distance).rem_euclid(2.0 * PI);
    let c = distance / (2.0 * k);
    let out = f
        .to_spectrum()
        .map_pointwise(|ky| Complex64::from_polar(1.0, carrier - c * ky * ky))
        .to_field();
    Ok(out)
}

/// Returns the masked field and the transmitted fraction of `norm2`.
pub fn apply_mask(f: &Field, mask: &Element) -> Result<(Field, f64)> {
    mask.validate()?;
    if !mask.is_mask() {
        return Err(Error::NotAMask(mask.name()));
    }
    let dy = f.grid().dy();
    let zero = Complex64::new(0.0, 0.0);
    let amp = f
        .amp()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if mask.transmits(f.grid().coord(i), dy) == Some(true) {
                *a
            } else {
                zero
            }
        })
        .collect();
    let out = Field::new(*f.grid(), amp)?;
    let t = fraction(&out, f);
    Ok((out, t))
}

/// Phase ramp `exp(-ikθy)`: shifts the spectrum by `-kθ`, so a plane wave
/// arriving at `θ` leaves at normal incidence.
pub fn apply_tilt(f: &Field, angle: f64, wavelength: f64) -> Result<Field> {
    check_wavelength(wavelength)?;
    Element::Tilt { angle }.validate()?;
    if angle == 0.0 {
        return Ok(f.clone());
    }
    let kt = wavenumber(wavelength) * angle;
    Ok(f.map_pointwise(|y| Complex64::from_polar(1.0, -kt * y)))
}

pub fn apply_element(f: &Field, e: &Element, wavelength: f64) -> Result<(Field, f64)> {
    match *e {
        Element::Lens { focal } => Ok((apply_lens(f, focal, wavelength)?, 1.0)),
        Element::FreeSpace { distance } => Ok((propagate(f, distance, wavelength)?, 1.0)),
        Element::Tilt { angle } => Ok((apply_tilt(f, angle, wavelength)?, 1.0)),
        _ => apply_mask(f, e),
    }
}

/// Left-to-right application. The returned fraction is `norm2(out)/norm2(in)`.
pub fn apply_train(f: &Field, train: &OpticalTrain) -> Result<(Field, f64)> {
    let (out, _) = apply_train_traced(f, train)?;
    let t = fraction(&out, f);
    Ok((out, t))
}

/// Like [`apply_train`] but also returns every element's own transmitted
/// fraction (1 for phase-only elements).
pub fn apply_train_traced(f: &Field, train: &OpticalTrain) -> Result<(Field, Vec<f64>)> {
    if train.is_empty() {
        return Err(Error::EmptyTrain);
    }
    let mut cur = f.clone();
    let mut fractions = Vec::with_capacity(train.len());
    for e in &train.elements {
        let (next, t) = apply_element(&cur, e, train.wavelength)?;
        // A phase element reports 1 even on a zero field.
        fractions.push(if e.is_mask() { t } else { 1.0 });
        cur = next;
    }
    Ok((cur, fractions))
}

/// Tilt → entrance aperture → lens → f → pinhole → f → lens.
pub fn direction_filter_train(
    angle: f64,
    focal: f64,
    pinhole_radius: f64,
    aperture_radius: f64,
    wavelength: f64,
) -> Result<OpticalTrain> {
    OpticalTrain::new(
        vec![
            Element::Tilt { angle },
            Element::BlockOutsideAperture {
                radius: aperture_radius,
            },
            Element::Lens { focal },
            Element::FreeSpace { distance: focal },
            Element::Pinhole {
                radius: pinhole_radius,
                center: 0.0,
            },
            Element::FreeSpace { distance: focal },
            Element::Lens { focal },
        ],
        wavelength,
    )
}

pub fn direction_filter(
    f: &Field,
    angle: f64,
    focal: f64,
    pinhole_radius: f64,
    aperture_radius: f64,
    wavelength: f64,
) -> Result<(Field, f64)> {
    let train = direction_filter_train(angle, focal, pinhole_radius, aperture_radius, wavelength)?;
    apply_train(f, &train)
}

/// How well a direction-filter geometry meets the two small-parameter
/// conditions: angular tolerance small against the fringe angle `λ0/s`, and
/// the lens aperture large against `λ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterValidity {
    /// `h / focal`, the half-angle accepted by the pinhole.
    pub angular_tolerance: f64,
    /// `(h/focal) / (λ0/s)`.
    pub hf_ratio: f64,
    /// `λ0 / R`.
    pub r_ratio: f64,
    pub passes_hf_condition: bool,
    pub passes_r_condition: bool,
    pub threshold: f64,
    /// Focal-plane offset `η = focal·θ` of light arriving parallel to the lab axis.
    pub axis_spot_offset: f64,
    /// `η / h`; axis-parallel light misses the pinhole when this exceeds 1.
    pub axis_spot_offset_ratio: f64,
}

impl FilterValidity {
    pub fn passes(&self) -> bool {
        self.passes_hf_condition && self.passes_r_condition
    }
}

pub fn filter_validity(
    angle: f64,
    focal: f64,
    pinhole_radius: f64,
    aperture_radius: f64,
    slit_separation: f64,
    wavelength: f64,
) -> FilterValidity {
    let angular_tolerance = pinhole_radius / focal;
    let hf_ratio = angular_tolerance / (wavelength / slit_separation);
    let r_ratio = wavelength / aperture_radius;
    let eta = (focal * angle).abs();
    FilterValidity {
        angular_tolerance,
        hf_ratio,
        r_ratio,
        passes_hf_condition: hf_ratio <= VALIDITY_THRESHOLD,
        passes_r_condition: r_ratio <= VALIDITY_THRESHOLD,
        threshold: VALIDITY_THRESHOLD,
        axis_spot_offset: eta,
        axis_spot_offset_ratio: eta / pinhole_radius,
    }
}

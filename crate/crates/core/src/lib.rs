//! Scalar, paraxial wave-optics simulation of a transverse EPR photon pair.
//!
//! One photon of the pair (Alice's) is measured either in position or in
//! transverse momentum. Its twin (Bob's) passes a lens/pinhole/lens direction
//! filter and a double slit before reaching a screen. The crate computes Bob's
//! singles and coincidence patterns for every choice Alice can make and
//! quantifies whether Alice's choice is visible in Bob's singles.
//!
//! Layers, bottom up:
//!
//! - [`grid`], [`field`]: sampled transverse fields and the unitary Fourier pair.
//! - [`optics`], [`sampling`]: thin elements, free-space propagation, trains.
//! - [`state`], [`density`]: the two-photon state, partial trace and Alice's
//!   collapse ensembles.
//! - [`experiment`]: Bob's apparatus, pattern pushforward, visibility, Monte
//!   Carlo detection and the no-signaling comparator.

pub mod density;
pub mod error;
pub mod experiment;
pub mod field;
pub mod grid;
pub mod optics;
pub mod sampling;
pub mod state;

mod gram;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use field::{Field, Spectrum};
pub use grid::Grid;
pub use num_complex::Complex64;
pub use optics::{Element, OpticalTrain};
pub use state::{Basis, ConditionalEnsemble, JointState, Member};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::pattern::Pattern;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub seed: u64,
    pub n_emitted: u64,
    pub n_detected: u64,
    /// Screen coordinates in meters, in detection order.
    pub hits: Vec<f64>,
}

/// Emits `n_photons` from the source and records where the survivors land.
///
/// The detected count is binomial in the pattern's total weight; each hit
/// picks a screen sample with probability proportional to its intensity and
/// is spread uniformly across that sample's width.
pub fn monte_carlo_detect(p: &Pattern, n_photons: u64, seed: u64) -> Result<DetectionRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = p.total_weight.clamp(0.0, 1.0);
    let empty = DetectionRecord {
        seed,
        n_emitted: n_photons,
        n_detected: 0,
        hits: Vec::new(),
    };
    if n_photons == 0 || weight == 0.0 {
        return Ok(empty);
    }
    let n_detected = Binomial::new(n_photons, weight)
        .map_err(|e| Error::param("total weight", e.to_string()))?
        .sample(&mut rng);
    if n_detected == 0 {
        return Ok(empty);
    }
    let bins = WeightedIndex::new(&p.intensity).map_err(|e| Error::param("intensity", e.to_string()))?;
    let dy = p.grid.dy();
    let hits = (0..n_detected)
        .map(|_| {
            let i = bins.sample(&mut rng);
            p.grid.coord(i) + dy * (rng.random::<f64>() - 0.5)
        })
        .collect();
    Ok(DetectionRecord {
        seed,
        n_emitted: n_photons,
        n_detected,
        hits,
    })
}

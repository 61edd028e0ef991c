//! Flat `key = value` configuration files (TOML syntax, SI units).

use std::fmt::Write as _;
use std::path::Path;

use eprsim::experiment::{ExperimentConfig, Source};
use eprsim::Basis;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Every accepted key with its unit and meaning, in file order.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("n", "count", "grid points, power of two, at least 8"),
    ("dy", "m", "grid spacing"),
    ("wavelength", "m", "vacuum wavelength of both photons"),
    ("sigma_plus", "m", "spread of y_a + y_b in the source state"),
    ("sigma_minus", "m", "spread of y_a - y_b in the source state"),
    ("y0", "m", "mean offset of Bob's photon from Alice's"),
    ("theta", "rad", "angle of the direction-filter axis to the lab axis"),
    ("focal", "m", "focal length of both filter lenses"),
    ("pinhole_radius", "m", "half-width h of the focal-plane pinhole"),
    ("aperture_radius", "m", "half-width R of the filter entrance aperture"),
    ("slit_separation", "m", "center-to-center slit distance s"),
    ("slit_width", "m", "width w of each slit"),
    ("screen_distance", "m", "slits to screen"),
    ("alice_basis", "-", "\"none\", \"position\" or \"momentum\""),
    ("source", "-", "\"epr\" or \"plane_wave\" (uncorrelated control)"),
    ("source_angle", "rad", "Bob's plane-wave direction when source = \"plane_wave\""),
    ("n_photons", "count", "photons emitted for the Monte Carlo hits; 0 disables"),
    ("seed", "-", "Monte Carlo seed"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum AliceChoice {
    None,
    Position,
    Momentum,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: Option<usize>,
    dy: Option<f64>,
    wavelength: Option<f64>,
    sigma_plus: Option<f64>,
    sigma_minus: Option<f64>,
    y0: Option<f64>,
    theta: Option<f64>,
    focal: Option<f64>,
    pinhole_radius: Option<f64>,
    aperture_radius: Option<f64>,
    slit_separation: Option<f64>,
    slit_width: Option<f64>,
    screen_distance: Option<f64>,
    alice_basis: Option<AliceChoice>,
    source: Option<Source>,
    source_angle: Option<f64>,
    n_photons: Option<u64>,
    seed: Option<u64>,
}

/// A parsed and validated config plus one warning per defaulted key.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub config: ExperimentConfig,
    pub warnings: Vec<String>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

pub fn parse_config_str(text: &str, origin: &str) -> Result<Loaded, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Parse {
        origin: origin.to_string(),
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    let d = ExperimentConfig::default();
    let mut warnings = Vec::new();
    macro_rules! take {
        ($key:ident) => {
            match raw.$key {
                Some(v) => v,
                None => {
                    warnings.push(format!("missing key `{}`, using default {:?}", stringify!($key), d.$key));
                    d.$key
                }
            }
        };
    }
    let alice = match raw.alice_basis {
        Some(a) => a,
        None => {
            warnings.push("missing key `alice_basis`, using default \"none\"".to_string());
            AliceChoice::None
        }
    };
    let config = ExperimentConfig {
        n: take!(n),
        dy: take!(dy),
        wavelength: take!(wavelength),
        sigma_plus: take!(sigma_plus),
        sigma_minus: take!(sigma_minus),
        y0: take!(y0),
        theta: take!(theta),
        focal: take!(focal),
        pinhole_radius: take!(pinhole_radius),
        aperture_radius: take!(aperture_radius),
        slit_separation: take!(slit_separation),
        slit_width: take!(slit_width),
        screen_distance: take!(screen_distance),
        alice_basis: match alice {
            AliceChoice::None => None,
            AliceChoice::Position => Some(Basis::Position),
            AliceChoice::Momentum => Some(Basis::Momentum),
        },
        source: take!(source),
        source_angle: take!(source_angle),
        n_photons: take!(n_photons),
        seed: take!(seed),
    };
    config.validate()?;
    Ok(Loaded { config, warnings })
}

pub fn parse_config(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_str(&text, &path.display().to_string())
}

fn basis_name(b: Option<Basis>) -> &'static str {
    match b {
        None => "none",
        Some(Basis::Position) => "position",
        Some(Basis::Momentum) => "momentum",
    }
}

fn source_name(s: Source) -> &'static str {
    match s {
        Source::Epr => "epr",
        Source::PlaneWave => "plane_wave",
    }
}

/// `(key, value)` in TOML value syntax, in [`KEYS`] order. Floats use the
/// shortest representation that reads back bit-identical.
fn values(cfg: &ExperimentConfig) -> Vec<(&'static str, String)> {
    let f = |x: f64| format!("{x:?}");
    vec![
        ("n", cfg.n.to_string()),
        ("dy", f(cfg.dy)),
        ("wavelength", f(cfg.wavelength)),
        ("sigma_plus", f(cfg.sigma_plus)),
        ("sigma_minus", f(cfg.sigma_minus)),
        ("y0", f(cfg.y0)),
        ("theta", f(cfg.theta)),
        ("focal", f(cfg.focal)),
        ("pinhole_radius", f(cfg.pinhole_radius)),
        ("aperture_radius", f(cfg.aperture_radius)),
        ("slit_separation", f(cfg.slit_separation)),
        ("slit_width", f(cfg.slit_width)),
        ("screen_distance", f(cfg.screen_distance)),
        ("alice_basis", format!("\"{}\"", basis_name(cfg.alice_basis))),
        ("source", format!("\"{}\"", source_name(cfg.source))),
        ("source_angle", f(cfg.source_angle)),
        ("n_photons", cfg.n_photons.to_string()),
        ("seed", cfg.seed.to_string()),
    ]
}

/// Config file text with a unit comment on every line.
pub fn emit_config(cfg: &ExperimentConfig) -> String {
    let mut out = String::new();
    for ((key, value), (_, unit, doc)) in values(cfg).into_iter().zip(KEYS) {
        let _ = writeln!(out, "{key} = {value}  # [{unit}] {doc}");
    }
    out
}

/// Sorted `key=value` lines of every key except `seed`.
pub fn canonical(cfg: &ExperimentConfig) -> String {
    let mut kv: Vec<_> = values(cfg).into_iter().filter(|(k, _)| *k != "seed").collect();
    kv.sort();
    kv.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

/// SHA-256 of [`canonical`], hex encoded. The seed is reported separately.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(canonical(cfg).as_bytes()))
}

fn as_count(key: &str, v: f64) -> Result<u64, CliError> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(CliError::Usage(format!("`{key}` needs a non-negative integer, got {v}")))
    }
}

/// Overrides one numeric key.
pub fn set_numeric(cfg: &mut ExperimentConfig, key: &str, v: f64) -> Result<(), CliError> {
    match key {
        "n" => cfg.n = as_count(key, v)? as usize,
        "dy" => cfg.dy = v,
        "wavelength" => cfg.wavelength = v,
        "sigma_plus" => cfg.sigma_plus = v,
        "sigma_minus" => cfg.sigma_minus = v,
        "y0" => cfg.y0 = v,
        "theta" => cfg.theta = v,
        "focal" => cfg.focal = v,
        "pinhole_radius" => cfg.pinhole_radius = v,
        "aperture_radius" => cfg.aperture_radius = v,
        "slit_separation" => cfg.slit_separation = v,
        "slit_width" => cfg.slit_width = v,
        "screen_distance" => cfg.screen_distance = v,
        "source_angle" => cfg.source_angle = v,
        "n_photons" => cfg.n_photons = as_count(key, v)?,
        "seed" => cfg.seed = as_count(key, v)?,
        "alice_basis" | "source" => {
            return Err(CliError::Usage(format!("`{key}` is not a numeric key and cannot be swept")))
        }
        _ => return Err(CliError::Usage(format!("unknown key `{key}`"))),
    }
    Ok(())
}

use std::io::Write;
use std::path::{Path, PathBuf};

use eprsim::experiment::{bob_train, fringe_visibility, monte_carlo_detect, Experiment, ExperimentConfig, Pattern};
use eprsim::optics::FilterValidity;
use eprsim::sampling::{validate_sampling, SamplingReport};
use eprsim::{Basis, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{config_hash, emit_config, set_numeric};
use crate::error::CliError;
use crate::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub role: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub seed: u64,
    pub tool_version: String,
    pub outputs: Vec<OutputFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Singles visibility in `visibility_window_m`; null when the pattern
    /// is zero there.
    pub visibility: Option<f64>,
    pub visibility_window_m: [f64; 2],
    pub total_weight: f64,
    pub no_signaling_l1: f64,
    pub no_signaling_linf: f64,
    pub angular_tolerance_ratio: f64,
    pub r_condition_ratio: f64,
    pub filter_valid: bool,
    pub sampling_clean: bool,
    pub alice_basis: Option<Basis>,
    /// Momentum basis only: coincidences with `|k_a + kθ| ≤ k·h/f`.
    pub coincidence_visibility: Option<f64>,
    pub coincidence_selected_weight: Option<f64>,
    pub n_detected: Option<u64>,
    pub config_hash: String,
    pub seed: u64,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub filter: FilterValidity,
    pub sampling: SamplingReport,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: RunOutcome,
}

/// Writes via a temporary file in the same directory and a rename, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn pattern_csv(p: &Pattern) -> String {
    let mut s = String::from("y_m,intensity_per_m\n");
    for (i, x) in p.intensity.iter().enumerate() {
        s.push_str(&format!("{:.12e},{:.12e}\n", p.grid.coord(i), x));
    }
    s
}

fn json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

fn visibility(p: &Pattern, window: (f64, f64)) -> Result<Option<f64>, CliError> {
    match fringe_visibility(p, window) {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroPattern) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn validity_report(cfg: &ExperimentConfig) -> Result<ValidityReport, CliError> {
    cfg.validate()?;
    let (train, filter) = bob_train(cfg)?;
    let sampling = validate_sampling(&cfg.grid()?, &train);
    let passes = filter.passes() && sampling.is_clean();
    Ok(ValidityReport {
        filter,
        sampling,
        passes,
    })
}

/// One full run into `out`: singles pattern, no-signaling distance,
/// validity report, optional coincidences and hits, and a manifest.
pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome, CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let ex = Experiment::new(cfg)?;
    let hash = config_hash(cfg);
    let mut outputs = Vec::new();
    let mut emit = |role: &str, name: &str, bytes: &[u8]| -> Result<(), CliError> {
        let path = out.join(name);
        write_atomic(&path, bytes)?;
        outputs.push(OutputFile {
            role: role.to_string(),
            path,
        });
        Ok(())
    };

    emit("config", "config.toml", emit_config(cfg).as_bytes())?;

    let singles = ex.singles(cfg.alice_basis)?;
    emit("pattern_csv", "pattern.csv", pattern_csv(&singles).as_bytes())?;
    let window = ex.visibility_window();

    let (mut coincidence_visibility, mut coincidence_selected_weight) = (None, None);
    if cfg.alice_basis == Some(Basis::Momentum) {
        match ex.filtered_coincidences() {
            Ok(c) => {
                coincidence_visibility = visibility(&c.pattern, window)?;
                coincidence_selected_weight = Some(c.selected_weight);
                emit("coincidence_csv", "coincidence.csv", pattern_csv(&c.pattern).as_bytes())?;
            }
            Err(Error::NoCoincidences) => {}
            Err(e) => return Err(e.into()),
        }
    }

    let mut n_detected = None;
    if cfg.n_photons > 0 {
        let rec = monte_carlo_detect(&singles, cfg.n_photons, cfg.seed)?;
        let mut s = String::from("y_m\n");
        for y in &rec.hits {
            s.push_str(&format!("{y:.12e}\n"));
        }
        emit("hits_csv", "hits.csv", s.as_bytes())?;
        n_detected = Some(rec.n_detected);
    }

    let report = ValidityReport {
        filter: *ex.validity(),
        sampling: ex.sampling().clone(),
        passes: ex.validity().passes() && ex.sampling().is_clean(),
    };
    emit("validity_report", "validity.json", &json(&report))?;

    let ns = ex.no_signaling()?;
    let summary = Summary {
        visibility: visibility(&singles, window)?,
        visibility_window_m: [window.0, window.1],
        total_weight: singles.total_weight,
        no_signaling_l1: ns.l1,
        no_signaling_linf: ns.linf,
        angular_tolerance_ratio: report.filter.hf_ratio,
        r_condition_ratio: report.filter.r_ratio,
        filter_valid: report.filter.passes(),
        sampling_clean: report.sampling.is_clean(),
        alice_basis: cfg.alice_basis,
        coincidence_visibility,
        coincidence_selected_weight,
        n_detected,
        config_hash: hash.clone(),
        seed: cfg.seed,
        tool_version: TOOL_VERSION.to_string(),
    };
    emit("summary_json", "summary.json", &json(&summary))?;

    let manifest = RunManifest {
        config_hash: hash,
        seed: cfg.seed,
        tool_version: TOOL_VERSION.to_string(),
        outputs,
    };
    write_atomic(&out.join("manifest.json"), &json(&manifest))?;
    Ok(RunOutcome { manifest, summary })
}

/// `KEY=v1,v2,...`.
pub fn parse_sweep(spec: &str) -> Result<(String, Vec<f64>), CliError> {
    let (key, list) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("sweep `{spec}` must look like KEY=v1,v2,...")))?;
    let values = list
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("sweep value `{v}` is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((key.trim().to_string(), values))
}

/// Runs every sweep point into `out/point_NNN` and writes `out/sweep.csv`.
///
/// Point `i` uses seed `seed + i` unless the seed itself is swept, so a
/// single-point sweep reproduces `run`.
pub fn sweep(
    cfg: &ExperimentConfig,
    key: &str,
    values: &[f64],
    out: &Path,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>, CliError> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".to_string()));
    }
    let configs = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut c = cfg.clone();
            c.seed = cfg.seed.wrapping_add(i as u64);
            set_numeric(&mut c, key, v)?;
            c.validate()?;
            Ok(c)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let outcomes = pool.install(|| {
        configs
            .par_iter()
            .enumerate()
            .map(|(i, c)| run(c, &out.join(format!("point_{i:03}"))))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut table = String::from("value,visibility,total_weight,no_signaling_l1\n");
    for (v, o) in values.iter().zip(&outcomes) {
        let vis = o.summary.visibility.map_or("nan".to_string(), |x| format!("{x:.12e}"));
        table.push_str(&format!(
            "{v:.12e},{vis},{:.12e},{:.12e}\n",
            o.summary.total_weight, o.summary.no_signaling_l1
        ));
    }
    write_atomic(&out.join("sweep.csv"), table.as_bytes())?;
    Ok(values
        .iter()
        .zip(outcomes)
        .map(|(&value, outcome)| SweepRow { value, outcome })
        .collect())
}

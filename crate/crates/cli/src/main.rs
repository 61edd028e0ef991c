use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eprsim::experiment::ExperimentConfig;
use eprsim_cli::{emit_config, parse_config, parse_sweep, run, sweep, validity_report, CliError};

#[derive(Parser)]
#[command(name = "eprsim", version, about = "Direction-filtered double slit fed by one photon of an EPR pair")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration and write its outputs.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one configuration per value of a numeric key.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// KEY=v1,v2,...
        #[arg(long)]
        sweep: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the filter-validity ratios and sampling flags; exit 2 on failure.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the default config file.
    PrintDefaults,
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig, CliError> {
    let loaded = parse_config(path)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    let mut cfg = loaded.config;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Run { config, out, seed } => {
            let cfg = load(&config, seed)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.threads.unwrap_or(0))
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let outcome = pool.install(|| run(&cfg, &out))?;
            for f in &outcome.manifest.outputs {
                println!("{}\t{}", f.role, f.path.display());
            }
            Ok(0)
        }
        Command::Sweep {
            config,
            out,
            sweep: spec,
            seed,
        } => {
            let cfg = load(&config, seed)?;
            let (key, values) = parse_sweep(&spec)?;
            let rows = sweep(&cfg, &key, &values, &out, cli.threads)?;
            println!("{} points written to {}", rows.len(), out.join("sweep.csv").display());
            Ok(0)
        }
        Command::Validate { config } => {
            let cfg = load(&config, None)?;
            let r = validity_report(&cfg)?;
            let f = &r.filter;
            let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
            println!(
                "angular tolerance ratio (h/f)/(λ/s) = {:.4e}  [{}, threshold {}]",
                f.hf_ratio,
                mark(f.passes_hf_condition),
                f.threshold
            );
            println!(
                "aperture ratio λ/R = {:.4e}  [{}, threshold {}]",
                f.r_ratio,
                mark(f.passes_r_condition),
                f.threshold
            );
            println!("axis spot offset f·θ/h = {:.4}", f.axis_spot_offset_ratio);
            if r.sampling.is_clean() {
                println!("sampling: clean");
            }
            for flag in &r.sampling.flags {
                println!("sampling: element {}: {:?}", flag.element, flag.issue);
            }
            Ok(if r.passes { 0 } else { 2 })
        }
        Command::PrintDefaults => {
            print!("{}", emit_config(&ExperimentConfig::default()));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

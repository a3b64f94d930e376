//! Experiment runner: JSON config in, CSV table plus JSON summary out.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{Experiment, ExperimentConfig};
pub use error::CliError;
pub use experiments::run_experiment;
pub use report::{Bound, Check, NamedFit, Outcome, Results};

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "MIPT_QFI_THREADS";

/// Paths written for one run.
#[derive(Debug, Clone)]
pub struct Written {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub timing: PathBuf,
}

pub fn write_outcome(outcome: &Outcome, dir: &Path, wall_time_s: f64) -> Result<Written, CliError> {
    let name = outcome.config.experiment().name();
    fs::create_dir_all(dir).map_err(|e| CliError::from(e).context(&dir.display().to_string()))?;
    let w = Written {
        csv: dir.join(format!("{name}.csv")),
        summary: dir.join(format!("{name}.summary.json")),
        timing: dir.join(format!("{name}.timing.json")),
    };
    let timing = serde_json::json!({ "experiment": name, "wall_time_s": wall_time_s });
    for (path, text) in [
        (&w.csv, outcome.csv()),
        (&w.summary, outcome.summary_json()),
        (&w.timing, format!("{}\n", serde_json::to_string_pretty(&timing).expect("timing serializes"))),
    ] {
        fs::write(path, text).map_err(|e| CliError::from(e).context(&path.display().to_string()))?;
    }
    Ok(w)
}

/// Resolves the worker count: the environment variable wins over the flag; 0 means rayon's default.
pub fn thread_count(flag: Option<usize>) -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{THREADS_ENV}: expected a non-negative integer, got {v:?}"))),
        Err(_) => Ok(flag.unwrap_or(0)),
    }
}

/// Loads the config (or the subcommand's defaults), runs it on a pool of `threads` workers and
/// writes the outputs. Failed checks are reported after the files are written.
pub fn execute(
    experiment: Experiment,
    config_path: Option<&Path>,
    out: Option<&Path>,
    threads: usize,
) -> Result<(Outcome, Written), CliError> {
    let config = match config_path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::from(e).context(&p.display().to_string()))?;
            ExperimentConfig::from_json(&text)?
        }
        None => experiment.default_config(),
    };
    if config.experiment() != experiment {
        return Err(CliError::Config(format!(
            "experiment: config is for {:?} but the subcommand is {:?}",
            config.experiment().name(),
            experiment.name()
        )));
    }
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| config.output_path().cloned())
        .unwrap_or_else(|| PathBuf::from("."));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    let start = Instant::now();
    let outcome = pool.install(|| run_experiment(&config))?;
    let wall = start.elapsed().as_secs_f64();
    let written = write_outcome(&outcome, &dir, wall)?;
    Ok((outcome, written))
}

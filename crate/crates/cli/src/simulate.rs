use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use spinmarket::pricing::{log_returns, price_series};
use spinmarket::{run_simulation, Series};

use crate::analyze::{analyze, write_analysis};
use crate::config::{Artifact, ExperimentConfig};
use crate::csvio::write_series;
use crate::error::{CliError, Result};
use crate::plot::{figures_for_run, write_figure};
use crate::record::{checksums, RunRecord, CONFIG_SNAPSHOT_FILE};

pub const MAGNETIZATION_FILE: &str = "magnetization.csv";
pub const PRICE_FILE: &str = "price.csv";

pub fn returns_file(tau: usize) -> String {
    format!("returns_tau{tau}.csv")
}

/// Runs one experiment and writes everything it asks for into its output
/// directory, followed by `config.toml` and `run_record.toml`.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;

    let started = Instant::now();
    let m = run_simulation(&cfg.model)?;
    let mut files: Vec<PathBuf> = Vec::new();

    if cfg.wants(Artifact::Series) {
        let path = dir.join(MAGNETIZATION_FILE);
        write_series(&path, &m)?;
        files.push(path);
        let path = dir.join(PRICE_FILE);
        write_series(&path, &price_series(&m, cfg.price)?)?;
        files.push(path);
        for &tau in &cfg.taus {
            let path = dir.join(returns_file(tau));
            write_series(&path, &log_returns(&m, tau)?)?;
            files.push(path);
        }
    }
    if cfg.wants(Artifact::Histogram) || cfg.wants(Artifact::Autocorrelation) {
        files.extend(write_analysis(&analyze(&m, cfg)?, dir)?);
    }
    if cfg.wants(Artifact::Figures) {
        for (name, fig) in figures_for_run(&m, cfg)? {
            files.push(write_figure(&fig, &dir.join(name))?);
        }
    }

    let snapshot = cfg.to_file_config();
    let path = dir.join(CONFIG_SNAPSHOT_FILE);
    std::fs::write(&path, snapshot.to_toml()).map_err(CliError::io(&path))?;
    files.push(path);

    let record = RunRecord {
        version: env!("CARGO_PKG_VERSION").into(),
        seed: cfg.model.seed,
        seed_source: cfg.seed_source,
        duration_secs: started.elapsed().as_secs_f64(),
        checksums: checksums(dir, &files)?,
        config: snapshot,
    };
    record.write(dir)?;
    Ok(record)
}

/// Independent runs, executed in parallel. Each writes only to its own directory.
pub fn cmd_simulate_batch(cfgs: &[ExperimentConfig]) -> Result<Vec<RunRecord>> {
    cfgs.par_iter().map(cmd_simulate).collect()
}

/// Runs the model and returns its magnetization without writing anything.
pub fn simulate_in_memory(cfg: &ExperimentConfig) -> Result<Series> {
    cfg.validate()?;
    Ok(run_simulation(&cfg.model)?)
}

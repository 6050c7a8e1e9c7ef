#![allow(dead_code)]

use std::path::Path;

use spinmarket_cli::ExperimentConfig;

/// A short J = 1, sigma = 1 run on 32x32 writing into `dir`.
pub fn short_config(dir: &Path, lambda: f64, steps: u64, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::with_seed(seed);
    cfg.model.lambda = lambda;
    cfg.model.thermalization_steps = 200;
    cfg.model.measurement_steps = steps;
    cfg.max_lag = 20;
    cfg.output_dir = dir.to_path_buf();
    cfg
}

pub fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

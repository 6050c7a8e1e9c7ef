//! Experiment configuration: command-line flags layered over an optional
//! flat TOML file, layered over defaults.
//!
//! The file uses the flag names as keys:
//!
//! ```toml
//! lattice-size = 32
//! coupling = 1.0
//! sigma = 1.0
//! lambda = 10.0
//! threshold-mode = "frozen"
//! thermalization = 5000
//! steps = 50000
//! seed = 42
//! tau = [1, 16]
//! max-lag = 200
//! bins = 101
//! p0 = 1.0
//! out = "out"
//! format = "csv"
//! outputs = ["series", "histogram", "autocorrelation"]
//! ```

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use spinmarket::{ModelParams, PriceParams, ThresholdMode};

use crate::error::{CliError, Result};

pub const DEFAULT_STEPS: u64 = 50_000;
pub const DEFAULT_TAUS: [usize; 2] = [1, 16];
pub const DEFAULT_MAX_LAG: usize = 200;
pub const DEFAULT_BINS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
}

/// Artifacts a run can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Artifact {
    /// Magnetization, price and return series.
    Series,
    /// Standardized return histograms with a Gaussian reference column.
    Histogram,
    /// Autocorrelation of returns and absolute returns, plus decay fits.
    Autocorrelation,
    /// SVG figures.
    Figures,
}

pub const DEFAULT_OUTPUTS: [Artifact; 3] =
    [Artifact::Series, Artifact::Histogram, Artifact::Autocorrelation];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    Explicit,
    Entropy,
}

/// Flags shared by `simulate` and `analyze`.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct RunArgs {
    /// Flat TOML file with the same keys as these flags; flags win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Lattice side L (the lattice has L*L agents).
    #[arg(long, value_name = "L")]
    pub lattice_size: Option<usize>,
    /// Nearest-neighbour coupling J.
    #[arg(long, value_name = "J", allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Strength of the individual Gaussian opinion.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Threshold coefficient. Repeat to sweep several values.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Vec<f64>,
    /// `frozen` (threshold fixed for a whole step, the default) or `live`.
    #[arg(long, value_name = "MODE")]
    pub threshold_mode: Option<ThresholdMode>,
    /// Steps discarded before measuring.
    #[arg(long, value_name = "STEPS")]
    pub thermalization: Option<u64>,
    /// Measured steps.
    #[arg(long)]
    pub steps: Option<u64>,
    /// Drawn from system entropy (and recorded) when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Return lag; repeatable.
    #[arg(long, value_name = "TAU")]
    pub tau: Vec<usize>,
    /// Largest autocorrelation lag.
    #[arg(long)]
    pub max_lag: Option<usize>,
    /// Histogram bins over the standardized [-5, 5] window.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Constant fundamental price.
    #[arg(long)]
    pub p0: Option<f64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Artifact to emit; repeatable.
    #[arg(long = "output", value_enum)]
    pub outputs: Vec<Artifact>,
}

/// Contents of a config file. Every key is optional; unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_mode: Option<ThresholdMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thermalization: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::seed_serde::option"
    )]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_lag: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<Artifact>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelParams,
    pub price: PriceParams,
    pub taus: Vec<usize>,
    pub max_lag: usize,
    pub bins: usize,
    pub outputs: Vec<Artifact>,
    pub output_dir: PathBuf,
    pub format: Format,
    pub seed_source: SeedSource,
}

impl ExperimentConfig {
    /// Default 32x32 experiment with the given seed.
    pub fn with_seed(seed: u64) -> Self {
        ExperimentConfig {
            model: ModelParams {
                measurement_steps: DEFAULT_STEPS,
                seed,
                ..ModelParams::default()
            },
            price: PriceParams::default(),
            taus: DEFAULT_TAUS.to_vec(),
            max_lag: DEFAULT_MAX_LAG,
            bins: DEFAULT_BINS,
            outputs: DEFAULT_OUTPUTS.to_vec(),
            output_dir: PathBuf::from("out"),
            format: Format::Csv,
            seed_source: SeedSource::Explicit,
        }
    }

    pub fn wants(&self, a: Artifact) -> bool {
        self.outputs.contains(&a)
    }

    /// Flat form, loadable again with `--config`. The seed is always written.
    pub fn to_file_config(&self) -> FileConfig {
        let m = &self.model;
        FileConfig {
            lattice_size: Some(m.side),
            coupling: Some(m.coupling),
            sigma: Some(m.sigma),
            lambda: Some(m.lambda),
            threshold_mode: Some(m.threshold_mode),
            thermalization: Some(m.thermalization_steps),
            steps: Some(m.measurement_steps),
            seed: Some(m.seed),
            tau: Some(self.taus.clone()),
            max_lag: Some(self.max_lag),
            bins: Some(self.bins),
            p0: Some(self.price.p0),
            out: Some(self.output_dir.clone()),
            format: Some(self.format),
            outputs: Some(self.outputs.clone()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate().map_err(param_error)?;
        self.price.validate().map_err(param_error)?;
        if self.taus.is_empty() {
            return Err(CliError::Config("--tau: at least one lag is required".into()));
        }
        for &tau in &self.taus {
            if tau < 1 {
                return Err(CliError::Config(format!(
                    "--tau: must be an integer >= 1 (got {tau})"
                )));
            }
            if tau as u64 >= self.model.measurement_steps {
                return Err(CliError::Config(format!(
                    "--tau: must be below --steps = {} (got {tau})",
                    self.model.measurement_steps
                )));
            }
        }
        if self.max_lag < 1 {
            return Err(CliError::Config(format!(
                "--max-lag: must be an integer >= 1 (got {})",
                self.max_lag
            )));
        }
        if self.bins < 1 {
            return Err(CliError::Config("--bins: must be an integer >= 1 (got 0)".into()));
        }
        Ok(())
    }
}

fn param_error(e: spinmarket::Error) -> CliError {
    match e {
        spinmarket::Error::InvalidParam { name, value, expected } => {
            CliError::Config(format!("--{name}: expected {expected} (got {value})"))
        }
        other => CliError::Config(other.to_string()),
    }
}

fn entropy_seed() -> u64 {
    use rand::Rng;
    rand::rng().random()
}

fn resolve(args: &RunArgs, file: &FileConfig, lambda: Option<f64>) -> Result<ExperimentConfig> {
    let (seed, seed_source) = match args.seed.or(file.seed) {
        Some(s) => (s, SeedSource::Explicit),
        None => (entropy_seed(), SeedSource::Entropy),
    };
    let mut cfg = ExperimentConfig::with_seed(seed);
    cfg.seed_source = seed_source;

    let m = &mut cfg.model;
    if let Some(v) = args.lattice_size.or(file.lattice_size) {
        m.side = v;
    }
    if let Some(v) = args.coupling.or(file.coupling) {
        m.coupling = v;
    }
    if let Some(v) = args.sigma.or(file.sigma) {
        m.sigma = v;
    }
    if let Some(v) = lambda.or(file.lambda) {
        m.lambda = v;
    }
    if let Some(v) = args.threshold_mode.or(file.threshold_mode) {
        m.threshold_mode = v;
    }
    if let Some(v) = args.thermalization.or(file.thermalization) {
        m.thermalization_steps = v;
    }
    if let Some(v) = args.steps.or(file.steps) {
        m.measurement_steps = v;
    }
    if !args.tau.is_empty() {
        cfg.taus = args.tau.clone();
    } else if let Some(t) = &file.tau {
        cfg.taus = t.clone();
    }
    if let Some(v) = args.max_lag.or(file.max_lag) {
        cfg.max_lag = v;
    }
    if let Some(v) = args.bins.or(file.bins) {
        cfg.bins = v;
    }
    if let Some(v) = args.p0.or(file.p0) {
        cfg.price.p0 = v;
    }
    if let Some(v) = args.out.clone().or_else(|| file.out.clone()) {
        cfg.output_dir = v;
    }
    if let Some(v) = args.format.or(file.format) {
        cfg.format = v;
    }
    if !args.outputs.is_empty() {
        cfg.outputs = args.outputs.clone();
    } else if let Some(o) = &file.outputs {
        cfg.outputs = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load(args: &RunArgs) -> Result<FileConfig> {
    match &args.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

/// Resolves a single experiment. Fails if more than one `--lambda` was given.
pub fn parse_config(args: &RunArgs) -> Result<ExperimentConfig> {
    if args.lambda.len() > 1 {
        return Err(CliError::Config(
            "--lambda: expected a single value here; sweeps are only supported by `simulate`".into(),
        ));
    }
    let file = load(args)?;
    resolve(args, &file, args.lambda.first().copied())
}

/// One experiment per `--lambda` value. With several values each run writes
/// into `<out>/lambda_<value>`, and all share one seed.
pub fn parse_sweep(args: &RunArgs) -> Result<Vec<ExperimentConfig>> {
    if args.lambda.len() <= 1 {
        return Ok(vec![parse_config(args)?]);
    }
    let file = load(args)?;
    let first = resolve(args, &file, args.lambda.first().copied())?;
    let seed_args = RunArgs {
        seed: Some(first.model.seed),
        ..args.clone()
    };
    args.lambda
        .iter()
        .map(|&l| {
            let mut cfg = resolve(&seed_args, &file, Some(l))?;
            cfg.seed_source = first.seed_source;
            cfg.output_dir = first.output_dir.join(format!("lambda_{l}"));
            Ok(cfg)
        })
        .collect()
}

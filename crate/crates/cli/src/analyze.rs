//! Statistics artifacts for a magnetization series: standardized return
//! histograms per lag, autocorrelation of `r` and `|r|`, decay fits, and
//! summary moments.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spinmarket::pricing::log_returns;
use spinmarket::statistics::{
    abs_series, autocorrelation, fit_decay, gaussian_reference, histogram, kurtosis_standard_error,
    standardize, summary, DecayModel, Histogram,
};
use spinmarket::Series;

use crate::config::{Artifact, ExperimentConfig, FileConfig};
use crate::csvio::{
    histogram_rows, read_series, write_rows, AutocorrelationRow, DecayFitRow, HistogramRow,
    SummaryRow,
};
use crate::error::{CliError, Result};

pub const AUTOCORRELATION_FILE: &str = "autocorrelation.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const DECAY_FIT_FILE: &str = "decay_fit.csv";
pub const ANALYSIS_META_FILE: &str = "analysis.toml";
/// Half-width, in standard deviations, of the default histogram window.
pub const HISTOGRAM_HALF_WIDTH: f64 = 5.0;
/// Largest lag used in decay fits of the absolute-return autocorrelation.
pub const FIT_MAX_LAG: usize = 50;

pub fn histogram_file(tau: usize) -> String {
    format!("histogram_tau{tau}.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramMeta {
    pub tau: usize,
    pub n_total: u64,
    pub bins: usize,
    pub mean_used: f64,
    pub stdev_used: f64,
    pub underflow: u64,
    pub overflow: u64,
}

/// Sidecar with what the CSV columns alone do not carry.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisMeta {
    /// Effective settings of the analysis run.
    #[serde(default)]
    pub config: Option<FileConfig>,
    pub histograms: Vec<HistogramMeta>,
    pub fit_errors: Vec<String>,
}

impl AnalysisMeta {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text).map_err(|e| CliError::data(path, e.message()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Analysis {
    pub summaries: Vec<SummaryRow>,
    pub histograms: Vec<(usize, Histogram)>,
    pub autocorrelation: Vec<AutocorrelationRow>,
    pub fits: Vec<DecayFitRow>,
    pub fit_errors: Vec<String>,
    pub config: Option<FileConfig>,
}

/// Histogram of standardized samples with `bins` equal bins over
/// `[-5, 5]`, widened by whole bins on both sides until every sample fits.
pub fn standardized_histogram(x: &[f64], bins: usize) -> Result<Histogram> {
    let (z, _) = standardize(x)?;
    let width = 2.0 * HISTOGRAM_HALF_WIDTH / bins as f64;
    let reach = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let extra = if reach > HISTOGRAM_HALF_WIDTH {
        ((reach - HISTOGRAM_HALF_WIDTH) / width).ceil() as usize
    } else {
        0
    };
    let half = HISTOGRAM_HALF_WIDTH + extra as f64 * width;
    Ok(histogram(x, bins + 2 * extra, Some((-half, half)), true)?)
}

fn fit_row(c: &Series, name: &str, model: DecayModel, hi: usize) -> std::result::Result<DecayFitRow, String> {
    let fit = fit_decay(c, model, (1, hi as i64)).map_err(|e| format!("{name} {model:?}: {e}"))?;
    Ok(DecayFitRow {
        series: name.into(),
        model,
        tau_min: 1,
        tau_max: hi as i64,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
    })
}

pub fn analyze(m: &Series, cfg: &ExperimentConfig) -> Result<Analysis> {
    let mut config = cfg.to_file_config();
    config.out = None;
    let mut a = Analysis {
        config: Some(config),
        ..Analysis::default()
    };
    for &tau in &cfg.taus {
        let r = log_returns(m, tau)?;
        let s = summary(&r.values)?;
        a.summaries.push(SummaryRow {
            tau,
            n: s.n,
            mean: s.mean,
            variance: s.variance,
            stdev: s.stdev,
            excess_kurtosis: s.excess_kurtosis,
            kurtosis_se: kurtosis_standard_error(s.n),
        });
        if cfg.wants(Artifact::Histogram) {
            a.histograms.push((tau, standardized_histogram(&r.values, cfg.bins)?));
        }
    }

    if cfg.wants(Artifact::Autocorrelation) {
        let r = log_returns(m, 1)?;
        let c_r = autocorrelation(&r.values, cfg.max_lag)?;
        let c_abs = autocorrelation(&abs_series(&r).values, cfg.max_lag)?;
        a.autocorrelation = c_r
            .values
            .iter()
            .zip(&c_abs.values)
            .enumerate()
            .map(|(lag, (&c_r, &c_abs_r))| AutocorrelationRow { lag, c_r, c_abs_r })
            .collect();
        let hi = cfg.max_lag.min(FIT_MAX_LAG);
        if hi >= 2 {
            for model in [DecayModel::Exponential, DecayModel::PowerLaw] {
                match fit_row(&c_abs, "c_abs_r", model, hi) {
                    Ok(row) => a.fits.push(row),
                    Err(e) => a.fit_errors.push(e),
                }
            }
        }
    }
    Ok(a)
}

pub fn write_analysis(a: &Analysis, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let mut written = Vec::new();

    let path = dir.join(SUMMARY_FILE);
    write_rows(&path, &a.summaries)?;
    written.push(path);

    let mut meta = AnalysisMeta {
        config: a.config.clone(),
        fit_errors: a.fit_errors.clone(),
        ..Default::default()
    };
    for (tau, h) in &a.histograms {
        let expected = gaussian_reference(&h.edges, h.n_total);
        let path = dir.join(histogram_file(*tau));
        write_rows(&path, histogram_rows(h, &expected))?;
        written.push(path);
        meta.histograms.push(HistogramMeta {
            tau: *tau,
            n_total: h.n_total,
            bins: h.bins(),
            mean_used: h.mean_used,
            stdev_used: h.stdev_used,
            underflow: h.underflow,
            overflow: h.overflow,
        });
    }

    if !a.autocorrelation.is_empty() {
        let path = dir.join(AUTOCORRELATION_FILE);
        write_rows(&path, &a.autocorrelation)?;
        written.push(path);
        let path = dir.join(DECAY_FIT_FILE);
        write_rows(&path, &a.fits)?;
        written.push(path);
    }

    let path = dir.join(ANALYSIS_META_FILE);
    let text = toml::to_string(&meta).expect("analysis metadata always serializes");
    std::fs::write(&path, text).map_err(CliError::io(&path))?;
    written.push(path);
    Ok(written)
}

/// Reads a magnetization series (a `t,value` file, or a directory holding
/// `magnetization.csv`), analyzes it and writes the artifacts to
/// `cfg.output_dir`. A config that asks for neither histograms nor
/// autocorrelation gets both.
pub fn cmd_analyze(input: &Path, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let mut cfg = cfg.clone();
    if !cfg.wants(Artifact::Histogram) && !cfg.wants(Artifact::Autocorrelation) {
        cfg.outputs.extend([Artifact::Histogram, Artifact::Autocorrelation]);
    }
    let cfg = &cfg;
    let file = if input.is_dir() {
        input.join(crate::simulate::MAGNETIZATION_FILE)
    } else {
        input.to_path_buf()
    };
    let m = read_series(&file)?;
    let a = analyze(&m, cfg).map_err(|e| match e {
        CliError::Model(inner) => CliError::data(&file, inner),
        other => other,
    })?;
    write_analysis(&a, &cfg.output_dir)
}

/// Reads back a histogram CSV.
pub fn read_histogram(path: &Path) -> Result<Vec<HistogramRow>> {
    crate::csvio::read_rows(path)
}

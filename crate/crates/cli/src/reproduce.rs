//! One-command recipes for the five standard figures.
//!
//! Every recipe runs its simulations at full scale (32x32, 5000
//! thermalization steps, `J = 1`) into `<out>/<fig>/<run>/`, then renders
//! `<out>/<fig>/<fig>.svg` from the CSVs it wrote. Run `k` of a recipe uses
//! seed `base_seed + k`.
//!
//! | recipe | runs | figure |
//! |--------|------|--------|
//! | fig1 | sigma = 1, lambda in {0, 5, 10, 15} | return traces |
//! | fig2 | sigma = 1, lambda in {0, 5, 10, 15}; lambda = 10, sigma in {2, 0.5} | r_16 histograms |
//! | fig3 | sigma = 1, lambda = 10, tau in {1, 2, 4, 8, 16, 32} | standardized, shifted histograms |
//! | fig4 | sigma = 1, lambda = 15 | C_r, linear axes |
//! | fig5 | sigma = 1, lambda = 15 | C_abs(r), log-log and semi-log |

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rayon::prelude::*;

use crate::config::{Artifact, ExperimentConfig};
use crate::csvio::{read_rows, AutocorrelationRow};
use crate::error::Result;
use crate::plot::{
    acf_linear_panel, acf_loglog_panel, acf_semilog_panel, read_histograms, returns_figure,
    histogram_panel, write_figure,
};
use crate::record::RunRecord;
use crate::simulate::cmd_simulate_batch;
use crate::svg::Figure;

pub const DEFAULT_BASE_SEED: u64 = 20_080_914;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Recipe {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Recipe {
    pub const ALL: [Recipe; 5] = [Recipe::Fig1, Recipe::Fig2, Recipe::Fig3, Recipe::Fig4, Recipe::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Recipe::Fig1 => "fig1",
            Recipe::Fig2 => "fig2",
            Recipe::Fig3 => "fig3",
            Recipe::Fig4 => "fig4",
            Recipe::Fig5 => "fig5",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub out: PathBuf,
    pub steps: u64,
    pub thermalization: u64,
    pub base_seed: u64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            out: PathBuf::from("out"),
            steps: crate::config::DEFAULT_STEPS,
            thermalization: spinmarket::params::DEFAULT_THERMALIZATION,
            base_seed: DEFAULT_BASE_SEED,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceReport {
    pub recipe: Recipe,
    pub figure: PathBuf,
    pub runs: Vec<(PathBuf, RunRecord)>,
}

struct RunSpec {
    label: &'static str,
    sigma: f64,
    lambda: f64,
}

const fn spec(label: &'static str, sigma: f64, lambda: f64) -> RunSpec {
    RunSpec { label, sigma, lambda }
}

fn specs(recipe: Recipe) -> (&'static [RunSpec], &'static [usize]) {
    const LAMBDAS: [RunSpec; 4] = [
        spec("lambda_0", 1.0, 0.0),
        spec("lambda_5", 1.0, 5.0),
        spec("lambda_10", 1.0, 10.0),
        spec("lambda_15", 1.0, 15.0),
    ];
    const FIG2: [RunSpec; 6] = [
        spec("lambda_0", 1.0, 0.0),
        spec("lambda_5", 1.0, 5.0),
        spec("lambda_10", 1.0, 10.0),
        spec("lambda_15", 1.0, 15.0),
        spec("lambda_10_sigma_2", 2.0, 10.0),
        spec("lambda_10_sigma_0.5", 0.5, 10.0),
    ];
    const FIG3: [RunSpec; 1] = [spec("lambda_10", 1.0, 10.0)];
    const FIG45: [RunSpec; 1] = [spec("lambda_15", 1.0, 15.0)];
    match recipe {
        Recipe::Fig1 => (&LAMBDAS, &[1]),
        Recipe::Fig2 => (&FIG2, &[16]),
        Recipe::Fig3 => (&FIG3, &[1, 2, 4, 8, 16, 32]),
        Recipe::Fig4 | Recipe::Fig5 => (&FIG45, &[1]),
    }
}

/// The experiments a recipe runs, with their output directories.
pub fn recipe_configs(recipe: Recipe, opts: &ReproduceOptions) -> Vec<ExperimentConfig> {
    let (runs, taus) = specs(recipe);
    let dir = opts.out.join(recipe.name());
    runs.iter()
        .enumerate()
        .map(|(k, r)| {
            let mut cfg = ExperimentConfig::with_seed(opts.base_seed + k as u64);
            cfg.model.sigma = r.sigma;
            cfg.model.lambda = r.lambda;
            cfg.model.measurement_steps = opts.steps;
            cfg.model.thermalization_steps = opts.thermalization;
            cfg.taus = taus.to_vec();
            cfg.max_lag = cfg.max_lag.min(opts.steps.saturating_sub(3) as usize).max(1);
            cfg.outputs = vec![Artifact::Series, Artifact::Histogram, Artifact::Autocorrelation];
            cfg.output_dir = dir.join(r.label);
            cfg
        })
        .collect()
}

fn caption(recipe: Recipe) -> &'static str {
    match recipe {
        Recipe::Fig1 => "Returns r(t), J = 1, sigma = 1, different lambda",
        Recipe::Fig2 => "Histograms of r_16",
        Recipe::Fig3 => "Standardized r_tau histograms, J = 1, sigma = 1, lambda = 10",
        Recipe::Fig4 => "Autocorrelation of returns, J = 1, sigma = 1, lambda = 15",
        Recipe::Fig5 => "Autocorrelation of absolute returns, J = 1, sigma = 1, lambda = 15",
    }
}

fn build_figure(recipe: Recipe, dirs: &[PathBuf], records: &[RunRecord]) -> Result<Figure> {
    let mut metadata = vec![
        ("generator".to_string(), format!("spinmarket {}", env!("CARGO_PKG_VERSION"))),
        ("recipe".to_string(), recipe.name().to_string()),
    ];
    for (d, rec) in dirs.iter().zip(records) {
        let c = &rec.config;
        metadata.push((
            d.display().to_string(),
            format!(
                "lattice-size={:?} coupling={:?} sigma={:?} lambda={:?} threshold-mode={:?} thermalization={:?} steps={:?} seed={}",
                c.lattice_size, c.coupling, c.sigma, c.lambda, c.threshold_mode, c.thermalization, c.steps, rec.seed
            ),
        ));
    }
    let title = caption(recipe);
    let label = |d: &Path| d.file_name().unwrap().to_string_lossy().into_owned();
    let relabel = |d: &PathBuf, mut hs: Vec<crate::plot::HistogramCurve>| {
        for h in &mut hs {
            h.label = label(d);
        }
        hs
    };
    let acf = || -> Result<Vec<AutocorrelationRow>> {
        read_rows(&dirs[0].join(crate::analyze::AUTOCORRELATION_FILE))
    };
    Ok(match recipe {
        Recipe::Fig1 => {
            let runs = dirs
                .iter()
                .map(|d| Ok((label(d), crate::csvio::read_series(&d.join(crate::simulate::returns_file(1)))?)))
                .collect::<Result<Vec<_>>>()?;
            returns_figure(title, &runs, metadata)
        }
        Recipe::Fig2 => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (k, d) in dirs.iter().enumerate() {
                let hs = relabel(d, read_histograms(d, &[16], true)?);
                if k < 4 { left.extend(hs) } else { right.extend(hs) }
            }
            let mut right_all = vec![left[2].clone()];
            right_all.extend(right);
            Figure {
                title: title.into(),
                metadata,
                panels: vec![
                    histogram_panel("sigma = 1, different lambda", &left, false, false),
                    histogram_panel("lambda = 10, different sigma", &right_all, false, false),
                ],
            }
        }
        Recipe::Fig3 => Figure {
            title: title.into(),
            metadata,
            panels: vec![histogram_panel(
                "shifted by 10^k; dashed: normal distribution",
                &read_histograms(&dirs[0], &[], false)?,
                true,
                true,
            )],
        },
        Recipe::Fig4 => Figure {
            title: title.into(),
            metadata,
            panels: vec![acf_linear_panel("C_r(tau)", &acf()?, false)],
        },
        Recipe::Fig5 => {
            let rows = acf()?;
            Figure {
                title: title.into(),
                metadata,
                panels: vec![
                    acf_loglog_panel("log-log", &rows),
                    acf_semilog_panel("semi-log", &rows),
                ],
            }
        }
    })
}

pub fn reproduce(recipe: Recipe, opts: &ReproduceOptions) -> Result<ReproduceReport> {
    let cfgs = recipe_configs(recipe, opts);
    let records = cmd_simulate_batch(&cfgs)?;
    let dirs: Vec<PathBuf> = cfgs.iter().map(|c| c.output_dir.clone()).collect();
    let fig = build_figure(recipe, &dirs, &records)?;
    let figure = write_figure(&fig, &opts.out.join(recipe.name()).join(format!("{}.svg", recipe.name())))?;
    Ok(ReproduceReport {
        recipe,
        figure,
        runs: dirs.into_iter().zip(records).collect(),
    })
}

/// Runs several recipes concurrently.
pub fn reproduce_many(recipes: &[Recipe], opts: &ReproduceOptions) -> Result<Vec<ReproduceReport>> {
    recipes.par_iter().map(|&r| reproduce(r, opts)).collect()
}

//! Figure documents built from run and analysis artifacts.
//!
//! Data-to-plot mapping (see [`crate::svg`] for the pixel mapping):
//! - return traces: `(t, r_1(t))` straight from `returns_tau1.csv`;
//! - histograms: one point per non-empty bin at the bin centre, with height
//!   `count / (n_total * width)`; the dashed reference uses
//!   `gaussian_expected` the same way. With `shift`, curve `k` (from 0) is
//!   multiplied by `10^k`. Raw-scale histograms map bin edges back through
//!   `z * stdev_used + mean_used` and divide the density by `stdev_used`;
//! - autocorrelation: `(lag, C)` rows of `autocorrelation.csv`, lag 0 and
//!   non-positive values omitted on log axes.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use spinmarket::pricing::log_returns;
use spinmarket::statistics::gaussian_reference;
use spinmarket::Series;

use crate::analyze::{
    analyze, histogram_file, AnalysisMeta, ANALYSIS_META_FILE, AUTOCORRELATION_FILE,
};
use crate::config::ExperimentConfig;
use crate::csvio::{histogram_rows, read_rows, read_series, AutocorrelationRow, HistogramRow};
use crate::error::{CliError, Result};
use crate::record::CONFIG_SNAPSHOT_FILE;
use crate::simulate::{returns_file, MAGNETIZATION_FILE};
use crate::svg::{Axis, Curve, Figure, Panel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureKind {
    /// Return trace `r(t)`, one panel per input.
    Returns,
    /// Standardized return histograms on a log scale with a dashed Gaussian.
    Histogram,
    /// Autocorrelation of `r` and `|r|` on linear, semi-log and log-log axes.
    Autocorrelation,
}

/// A histogram ready for plotting.
#[derive(Debug, Clone)]
pub struct HistogramCurve {
    pub label: String,
    pub rows: Vec<HistogramRow>,
    pub n_total: u64,
    /// `(mean, stdev)` to map standardized bins back to raw returns.
    pub raw_scale: Option<(f64, f64)>,
}

impl HistogramCurve {
    fn points(&self, factor: f64, column: impl Fn(&HistogramRow) -> f64, skip_empty: bool) -> Vec<(f64, f64)> {
        let n = self.n_total as f64;
        let (mean, sd) = self.raw_scale.unwrap_or((0.0, 1.0));
        self.rows
            .iter()
            .filter(|r| !skip_empty || r.count > 0)
            .map(|r| {
                let width = (r.bin_hi - r.bin_lo) * sd;
                let centre = 0.5 * (r.bin_lo + r.bin_hi) * sd + mean;
                (centre, factor * column(r) / (n * width))
            })
            .collect()
    }
}

pub fn returns_figure(title: &str, runs: &[(String, Series)], metadata: Vec<(String, String)>) -> Figure {
    let panels = runs
        .iter()
        .map(|(label, r)| Panel {
            title: label.clone(),
            x: Axis::linear("t"),
            y: Axis::linear("r(t)"),
            curves: vec![Curve::new(label.clone(), r.iter().map(|(t, v)| (t as f64, v)).collect())],
        })
        .collect();
    Figure {
        title: title.into(),
        metadata,
        panels,
    }
}

/// One panel of histograms. With `shift`, curve `k` is scaled by `10^k`.
pub fn histogram_panel(title: &str, curves: &[HistogramCurve], shift: bool, gaussian: bool) -> Panel {
    let raw = curves.iter().any(|c| c.raw_scale.is_some());
    let mut out = Vec::new();
    for (k, c) in curves.iter().enumerate() {
        let factor = if shift { 10f64.powi(k as i32) } else { 1.0 };
        out.push(Curve::new(c.label.clone(), c.points(factor, |r| r.count as f64, true)));
        if gaussian {
            out.push(
                Curve::new(format!("normal ({})", c.label), c.points(factor, |r| r.gaussian_expected, false))
                    .dashed(),
            );
        }
    }
    let x = if raw { "r" } else { "r / sigma_r" };
    let y = if shift { "P (shifted by 10^k)" } else { "P" };
    Panel {
        title: title.into(),
        x: Axis::linear(x),
        y: Axis::log(y),
        curves: out,
    }
}

fn acf_points(rows: &[AutocorrelationRow], col: fn(&AutocorrelationRow) -> f64, skip_zero: bool) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| !(skip_zero && r.lag == 0))
        .map(|r| (r.lag as f64, col(r)))
        .collect()
}

pub fn c_r(r: &AutocorrelationRow) -> f64 {
    r.c_r
}

pub fn c_abs_r(r: &AutocorrelationRow) -> f64 {
    r.c_abs_r
}

/// Linear-axis panel of `C_r` (and `C_|r|` when `both`).
pub fn acf_linear_panel(title: &str, rows: &[AutocorrelationRow], both: bool) -> Panel {
    let mut curves = vec![Curve::new("C_r", acf_points(rows, c_r, false))];
    if both {
        curves.push(Curve::new("C_|r|", acf_points(rows, c_abs_r, false)));
    }
    Panel {
        title: title.into(),
        x: Axis::linear("tau"),
        y: Axis::linear("C(tau)"),
        curves,
    }
}

pub fn acf_semilog_panel(title: &str, rows: &[AutocorrelationRow]) -> Panel {
    Panel {
        title: title.into(),
        x: Axis::linear("tau"),
        y: Axis::log("C_|r|(tau)"),
        curves: vec![Curve::new("C_|r|", acf_points(rows, c_abs_r, false))],
    }
}

pub fn acf_loglog_panel(title: &str, rows: &[AutocorrelationRow]) -> Panel {
    Panel {
        title: title.into(),
        x: Axis::log("tau"),
        y: Axis::log("C_|r|(tau)"),
        curves: vec![Curve::new("C_|r|", acf_points(rows, c_abs_r, true))],
    }
}

pub fn autocorrelation_figure(title: &str, rows: &[AutocorrelationRow], metadata: Vec<(String, String)>) -> Figure {
    Figure {
        title: title.into(),
        metadata,
        panels: vec![
            acf_linear_panel("linear", rows, true),
            acf_semilog_panel("semi-log", rows),
            acf_loglog_panel("log-log", rows),
        ],
    }
}

pub fn write_figure(fig: &Figure, path: &Path) -> Result<PathBuf> {
    let svg = fig.render().map_err(|e| CliError::data(path, e))?;
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(CliError::io(parent))?;
    }
    std::fs::write(path, svg).map_err(CliError::io(path))?;
    Ok(path.to_path_buf())
}

pub fn config_metadata(cfg: &ExperimentConfig) -> Vec<(String, String)> {
    let m = &cfg.model;
    vec![
        ("generator".into(), format!("spinmarket {}", env!("CARGO_PKG_VERSION"))),
        ("lattice-size".into(), m.side.to_string()),
        ("coupling".into(), m.coupling.to_string()),
        ("sigma".into(), m.sigma.to_string()),
        ("lambda".into(), m.lambda.to_string()),
        ("threshold-mode".into(), m.threshold_mode.to_string()),
        ("thermalization".into(), m.thermalization_steps.to_string()),
        ("steps".into(), m.measurement_steps.to_string()),
        ("seed".into(), m.seed.to_string()),
    ]
}

/// The standard figures for a single run, computed in memory.
pub fn figures_for_run(m: &Series, cfg: &ExperimentConfig) -> Result<Vec<(String, Figure)>> {
    let meta = config_metadata(cfg);
    let label = format!("lambda = {}", cfg.model.lambda);
    let mut figs = vec![(
        "returns.svg".to_string(),
        returns_figure("Returns", &[(label, log_returns(m, 1)?)], meta.clone()),
    )];
    let mut full = cfg.clone();
    full.outputs = vec![crate::config::Artifact::Histogram, crate::config::Artifact::Autocorrelation];
    let a = analyze(m, &full)?;
    let curves: Vec<HistogramCurve> = a
        .histograms
        .iter()
        .map(|(tau, h)| HistogramCurve {
            label: format!("tau = {tau}"),
            rows: histogram_rows(h, &gaussian_reference(&h.edges, h.n_total)),
            n_total: h.n_total,
            raw_scale: None,
        })
        .collect();
    figs.push((
        "histogram.svg".into(),
        Figure {
            title: "Standardized returns".into(),
            metadata: meta.clone(),
            panels: vec![histogram_panel("", &curves, true, true)],
        },
    ));
    figs.push((
        "autocorrelation.svg".into(),
        autocorrelation_figure("Autocorrelation", &a.autocorrelation, meta),
    ));
    Ok(figs)
}

fn dir_label(dir: &Path) -> String {
    dir.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string())
}

fn dir_metadata(dirs: &[PathBuf], kind: FigureKind) -> Vec<(String, String)> {
    let mut meta = vec![
        ("generator".into(), format!("spinmarket {}", env!("CARGO_PKG_VERSION"))),
        ("figure".into(), format!("{kind:?}").to_lowercase()),
    ];
    for d in dirs {
        meta.push(("input".into(), d.display().to_string()));
        let text = std::fs::read_to_string(d.join(CONFIG_SNAPSHOT_FILE)).ok().or_else(|| {
            let a = AnalysisMeta::read(&d.join(ANALYSIS_META_FILE)).ok()?;
            Some(a.config?.to_toml())
        });
        if let Some(text) = text {
            let flat = text.lines().collect::<Vec<_>>().join("; ");
            meta.push((format!("config[{}]", dir_label(d)), flat));
        }
    }
    meta
}

fn read_returns(dir: &Path) -> Result<Series> {
    let file = dir.join(returns_file(1));
    if file.exists() {
        return read_series(&file);
    }
    let m_file = dir.join(MAGNETIZATION_FILE);
    let m = read_series(&m_file)?;
    log_returns(&m, 1).map_err(|e| CliError::data(&m_file, e))
}

/// Every `histogram_tau*.csv` in `dir`, ordered by lag, optionally restricted to `taus`.
pub fn read_histograms(dir: &Path, taus: &[usize], raw: bool) -> Result<Vec<HistogramCurve>> {
    let meta_path = dir.join(ANALYSIS_META_FILE);
    let meta = AnalysisMeta::read(&meta_path)?;
    let mut out = Vec::new();
    for h in &meta.histograms {
        if !taus.is_empty() && !taus.contains(&h.tau) {
            continue;
        }
        let path = dir.join(histogram_file(h.tau));
        let rows: Vec<HistogramRow> = read_rows(&path)?;
        if rows.iter().all(|r| r.count == 0) {
            return Err(CliError::data(&path, "histogram is empty"));
        }
        out.push(HistogramCurve {
            label: format!("tau = {}", h.tau),
            rows,
            n_total: h.n_total,
            raw_scale: raw.then_some((h.mean_used, h.stdev_used)),
        });
    }
    if out.is_empty() {
        return Err(CliError::data(&meta_path, "no matching histograms"));
    }
    Ok(out)
}

pub struct PlotRequest {
    pub kind: FigureKind,
    pub inputs: Vec<PathBuf>,
    /// Restrict histograms to these lags (all when empty).
    pub taus: Vec<usize>,
    /// Multiply histogram `k` by `10^k`.
    pub shift: bool,
    /// Plot histograms against raw returns instead of standardized ones.
    pub raw: bool,
    pub output: PathBuf,
}

/// Reads artifacts from the input directories and writes one SVG document.
pub fn cmd_plot(req: &PlotRequest) -> Result<PathBuf> {
    if req.inputs.is_empty() {
        return Err(CliError::Config("--input: at least one directory is required".into()));
    }
    let meta = dir_metadata(&req.inputs, req.kind);
    let fig = match req.kind {
        FigureKind::Returns => {
            let runs = req
                .inputs
                .iter()
                .map(|d| Ok((dir_label(d), read_returns(d)?)))
                .collect::<Result<Vec<_>>>()?;
            returns_figure("Returns", &runs, meta)
        }
        FigureKind::Histogram => {
            let mut curves = Vec::new();
            for d in &req.inputs {
                let mut hs = read_histograms(d, &req.taus, req.raw)?;
                if req.inputs.len() > 1 {
                    for h in &mut hs {
                        h.label = format!("{}, {}", dir_label(d), h.label);
                    }
                }
                curves.extend(hs);
            }
            Figure {
                title: "Return histograms".into(),
                metadata: meta,
                panels: vec![histogram_panel("", &curves, req.shift, !req.raw)],
            }
        }
        FigureKind::Autocorrelation => {
            let [dir] = req.inputs.as_slice() else {
                return Err(CliError::Config(
                    "--input: autocorrelation figures take exactly one directory".into(),
                ));
            };
            let rows: Vec<AutocorrelationRow> = read_rows(&dir.join(AUTOCORRELATION_FILE))?;
            if rows.is_empty() {
                return Err(CliError::data(dir.join(AUTOCORRELATION_FILE), "no rows"));
            }
            autocorrelation_figure("Autocorrelation", &rows, meta)
        }
    };
    write_figure(&fig, &req.output)
}

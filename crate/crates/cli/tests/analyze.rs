mod common;

use common::short_config;
use spinmarket::statistics::summary;
use spinmarket::pricing::log_returns;
use spinmarket_cli::analyze::{cmd_analyze, histogram_file, read_histogram, AnalysisMeta, ANALYSIS_META_FILE, AUTOCORRELATION_FILE, SUMMARY_FILE};
use spinmarket_cli::config::Artifact;
use spinmarket_cli::csvio::{read_rows, read_series, write_series, AutocorrelationRow, SummaryRow};
use spinmarket_cli::simulate::{cmd_simulate, MAGNETIZATION_FILE};
use spinmarket::Series;

fn simulated(dir: &std::path::Path, taus: &[usize]) -> spinmarket_cli::ExperimentConfig {
    let mut cfg = short_config(dir, 10.0, 3000, 17);
    cfg.outputs = vec![Artifact::Series];
    cmd_simulate(&cfg).unwrap();
    cfg.taus = taus.to_vec();
    cfg.outputs = vec![Artifact::Histogram, Artifact::Autocorrelation];
    cfg.output_dir = dir.join("stats");
    cfg
}

#[test]
fn histogram_format_and_conservation() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = simulated(tmp.path(), &[1, 16]);
    cmd_analyze(tmp.path(), &cfg).unwrap();
    let stats = tmp.path().join("stats");
    let meta = AnalysisMeta::read(&stats.join(ANALYSIS_META_FILE)).unwrap();
    assert_eq!(meta.histograms.len(), 2);
    for h in &meta.histograms {
        let path = stats.join(histogram_file(h.tau));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next(), Some("bin_lo,bin_hi,count,gaussian_expected"));
        let rows = read_histogram(&path).unwrap();
        let total: u64 = rows.iter().map(|r| r.count).sum();
        assert_eq!(total, h.n_total, "tau {}", h.tau);
        assert_eq!(h.n_total as usize, 3000 - h.tau);
        assert_eq!((h.underflow, h.overflow), (0, 0));
        assert!(rows.windows(2).all(|w| w[0].bin_hi == w[1].bin_lo));
        let expected: f64 = rows.iter().map(|r| r.gaussian_expected).sum();
        assert!(expected <= h.n_total as f64 + 1e-6);
    }
}

#[test]
fn autocorrelation_starts_at_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = simulated(tmp.path(), &[1]);
    cmd_analyze(tmp.path(), &cfg).unwrap();
    let path = tmp.path().join("stats").join(AUTOCORRELATION_FILE);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("lag,c_r,c_abs_r"));
    let rows: Vec<AutocorrelationRow> = read_rows(&path).unwrap();
    assert_eq!(rows.len(), cfg.max_lag + 1);
    assert_eq!(rows[0].lag, 0);
    assert!((rows[0].c_r - 1.0).abs() < 1e-12);
    assert!((rows[0].c_abs_r - 1.0).abs() < 1e-12);
    assert!(rows.iter().enumerate().all(|(k, r)| r.lag == k));
}

#[test]
fn six_lags_give_six_histograms_and_moments() {
    let tmp = tempfile::tempdir().unwrap();
    let taus = [1, 2, 4, 8, 16, 32];
    let cfg = simulated(tmp.path(), &taus);
    cmd_analyze(tmp.path(), &cfg).unwrap();
    let stats = tmp.path().join("stats");
    for tau in taus {
        assert!(stats.join(histogram_file(tau)).is_file(), "tau {tau}");
    }
    let m = read_series(&tmp.path().join(MAGNETIZATION_FILE)).unwrap();
    let rows: Vec<SummaryRow> = read_rows(&stats.join(SUMMARY_FILE)).unwrap();
    assert_eq!(rows.iter().map(|r| r.tau).collect::<Vec<_>>(), taus);
    for row in &rows {
        let s = summary(log_returns(&m, row.tau).unwrap().as_ref()).unwrap();
        assert_eq!(row.n, s.n);
        assert_eq!(row.excess_kurtosis, s.excess_kurtosis);
        assert!(row.kurtosis_se > 0.0);
    }
}

#[test]
fn malformed_input_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("m.csv");
    std::fs::write(&path, "t,value\n0,0.5\n1,oops\n").unwrap();
    let cfg = short_config(tmp.path(), 0.0, 100, 1);
    assert_eq!(cmd_analyze(&path, &cfg).unwrap_err().exit_code(), 2);
    assert_eq!(cmd_analyze(&tmp.path().join("missing.csv"), &cfg).unwrap_err().exit_code(), 2);
}

#[test]
fn constant_series_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("m.csv");
    write_series(&path, &Series::new(0, vec![0.25; 200])).unwrap();
    let mut cfg = short_config(tmp.path(), 0.0, 100, 1);
    cfg.output_dir = tmp.path().join("out");
    let err = cmd_analyze(&path, &cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2, "{err}");
}

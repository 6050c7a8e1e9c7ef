//! CSV files. Every file has a header row; floats are written in the
//! shortest decimal form that parses back to the identical `f64`.
//!
//! | file | columns |
//! |------|---------|
//! | series | `t,value` |
//! | histogram | `bin_lo,bin_hi,count,gaussian_expected` |
//! | autocorrelation | `lag,c_r,c_abs_r` |
//! | summary | `tau,n,mean,variance,stdev,excess_kurtosis,kurtosis_se` |
//! | decay fits | `series,model,tau_min,tau_max,slope,intercept,r_squared` |

use std::path::Path;

use serde::{Deserialize, Serialize};
use spinmarket::statistics::{DecayModel, Histogram};
use spinmarket::Series;

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
struct SeriesRow {
    t: i64,
    value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
    pub gaussian_expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocorrelationRow {
    pub lag: usize,
    pub c_r: f64,
    pub c_abs_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub tau: usize,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub stdev: f64,
    pub excess_kurtosis: f64,
    pub kurtosis_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFitRow {
    pub series: String,
    pub model: DecayModel,
    pub tau_min: i64,
    pub tau_max: i64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| csv_error(path, e))).collect()
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        kind => CliError::data(path, format!("{kind:?}")),
    }
}

pub fn write_series(path: &Path, s: &Series) -> Result<()> {
    write_rows(path, s.iter().map(|(t, value)| SeriesRow { t, value }))
}

/// Reads a `t,value` file. Time indices must be consecutive.
pub fn read_series(path: &Path) -> Result<Series> {
    let rows: Vec<SeriesRow> = read_rows(path)?;
    let Some(first) = rows.first() else {
        return Err(CliError::data(path, "series file has no samples"));
    };
    let t0 = first.t;
    for (k, row) in rows.iter().enumerate() {
        if row.t != t0 + k as i64 {
            return Err(CliError::data(
                path,
                format!("row {}: expected t = {}, found {}", k + 2, t0 + k as i64, row.t),
            ));
        }
    }
    Ok(Series::new(t0, rows.into_iter().map(|r| r.value).collect()))
}

pub fn histogram_rows(h: &Histogram, expected: &[f64]) -> Vec<HistogramRow> {
    (0..h.bins())
        .map(|k| {
            let (bin_lo, bin_hi) = h.bin(k);
            HistogramRow {
                bin_lo,
                bin_hi,
                count: h.counts[k],
                gaussian_expected: expected[k],
            }
        })
        .collect()
}

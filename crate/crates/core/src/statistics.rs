//! Moments, histograms, a Gaussian reference, autocorrelation and decay fits.
//!
//! All moments use the population divisor `n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub stdev: f64,
    /// `m4 / m2^2 - 3`; NaN when the variance is zero.
    pub excess_kurtosis: f64,
}

impl SummaryStats {
    /// Zero variance: the sample cannot be standardized.
    pub fn is_degenerate(&self) -> bool {
        self.variance <= 0.0
    }
}

pub fn summary(x: &[f64]) -> Result<SummaryStats> {
    let n = x.len();
    if n < 2 {
        return Err(Error::TooShort { len: n, needed: 2 });
    }
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let (m2, m4) = x.iter().fold((0.0, 0.0), |(m2, m4), &v| {
        let d2 = (v - mean) * (v - mean);
        (m2 + d2, m4 + d2 * d2)
    });
    let (m2, m4) = (m2 / nf, m4 / nf);
    let excess_kurtosis = if m2 > 0.0 { m4 / (m2 * m2) - 3.0 } else { f64::NAN };
    Ok(SummaryStats {
        n,
        mean,
        variance: m2,
        stdev: m2.sqrt(),
        excess_kurtosis,
    })
}

/// Standard error of the sample excess kurtosis of `n` normal draws.
pub fn kurtosis_standard_error(n: usize) -> f64 {
    let n = n as f64;
    (24.0 * n * (n - 1.0) * (n - 1.0) / ((n - 3.0) * (n - 2.0) * (n + 3.0) * (n + 5.0))).sqrt()
}

/// `(x - mean) / stdev`, together with the statistics used.
pub fn standardize(x: &[f64]) -> Result<(Vec<f64>, SummaryStats)> {
    let s = summary(x)?;
    if s.is_degenerate() {
        return Err(Error::ZeroVariance);
    }
    Ok((x.iter().map(|v| (v - s.mean) / s.stdev).collect(), s))
}

/// Equal-width binned counts.
///
/// Samples (after standardization, if requested) outside `[edges[0], edges[last]]`
/// are not binned but still counted in `n_total`, split into `underflow` and
/// `overflow`. The last bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub n_total: u64,
    pub underflow: u64,
    pub overflow: u64,
    pub standardized: bool,
    /// Mean subtracted before binning (0 when not standardized).
    pub mean_used: f64,
    /// Divisor applied before binning (1 when not standardized).
    pub stdev_used: f64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn binned(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(lo, hi)` edges of bin `k`.
    pub fn bin(&self, k: usize) -> (f64, f64) {
        (self.edges[k], self.edges[k + 1])
    }

    /// Counts divided by `n_total * width`: a density comparable across samples.
    pub fn density(&self) -> Vec<f64> {
        (0..self.bins())
            .map(|k| {
                let (lo, hi) = self.bin(k);
                self.counts[k] as f64 / (self.n_total as f64 * (hi - lo))
            })
            .collect()
    }
}

pub fn histogram(
    x: &[f64],
    bins: usize,
    range: Option<(f64, f64)>,
    standardize_first: bool,
) -> Result<Histogram> {
    if x.is_empty() {
        return Err(Error::EmptySeries);
    }
    if bins == 0 {
        return Err(Error::InvalidParam {
            name: "bins",
            value: "0".into(),
            expected: "an integer >= 1",
        });
    }
    let (data, mean_used, stdev_used) = if standardize_first {
        let (z, s) = standardize(x)?;
        (z, s.mean, s.stdev)
    } else {
        (x.to_vec(), 0.0, 1.0)
    };

    let (lo, hi) = match range {
        Some((lo, hi)) => (lo, hi),
        None => {
            let (min, max) = data
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            if min == max {
                (min - 0.5, max + 0.5)
            } else {
                (min, max)
            }
        }
    };
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::BadRange { lo, hi });
    }

    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|k| lo + k as f64 * width).collect();
    edges[bins] = hi;

    let mut counts = vec![0u64; bins];
    let (mut underflow, mut overflow) = (0u64, 0u64);
    for &v in &data {
        if v < lo {
            underflow += 1;
        } else if v > hi || v.is_nan() {
            overflow += 1;
        } else {
            let mut k = (((v - lo) / width) as usize).min(bins - 1);
            // Correct for rounding at interior edges.
            if v < edges[k] {
                k -= 1;
            } else if v >= edges[k + 1] && k + 1 < bins {
                k += 1;
            }
            counts[k] += 1;
        }
    }

    Ok(Histogram {
        edges,
        counts,
        n_total: data.len() as u64,
        underflow,
        overflow,
        standardized: standardize_first,
        mean_used,
        stdev_used,
    })
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Expected count per bin for `n_total` standard-normal samples.
///
/// Panics unless `edges` is strictly increasing.
pub fn gaussian_reference(edges: &[f64], n_total: u64) -> Vec<f64> {
    assert!(
        edges.windows(2).all(|w| w[0] < w[1]),
        "bin edges must be strictly increasing"
    );
    let n = n_total as f64;
    edges
        .windows(2)
        .map(|w| n * (normal_cdf(w[1]) - normal_cdf(w[0])))
        .collect()
}

/// Sample autocorrelation `C(tau)` for `tau = 0..=max_lag`.
///
/// The mean and variance come from the whole series; the lag-`tau` covariance
/// averages the `n - tau` available products of deviations from that mean.
/// `C(0) = 1`.
pub fn autocorrelation(x: &[f64], max_lag: usize) -> Result<Series> {
    let n = x.len();
    if max_lag == 0 || n <= max_lag + 1 {
        return Err(Error::BadLag { tau: max_lag, len: n });
    }
    let s = summary(x)?;
    if s.is_degenerate() {
        return Err(Error::ZeroVariance);
    }
    let d: Vec<f64> = x.iter().map(|v| v - s.mean).collect();
    let c = (0..=max_lag)
        .map(|tau| {
            let cov = d[tau..].iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() / (n - tau) as f64;
            cov / s.variance
        })
        .collect();
    Ok(Series::new(0, c))
}

pub fn abs_series(x: &Series) -> Series {
    Series::new(x.t0, x.values.iter().map(|v| v.abs()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    /// `C = A exp(slope * tau)`: straight line of `ln C` against `tau`.
    Exponential,
    /// `C = A tau^slope`: straight line of `ln C` against `ln tau`.
    PowerLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl DecayFit {
    /// Decay rate of an exponential fit (`-slope`), or the power-law exponent (`slope`).
    pub fn rate_or_exponent(&self) -> f64 {
        match self.model {
            DecayModel::Exponential => -self.slope,
            DecayModel::PowerLaw => self.slope,
        }
    }
}

/// Least-squares line through `ln C(tau)` over `tau` in `[tau_min, tau_max]`.
/// Lags are the series' time indices.
pub fn fit_decay(c: &Series, model: DecayModel, (tau_min, tau_max): (i64, i64)) -> Result<DecayFit> {
    let bad = Error::BadFitRange { lo: tau_min, hi: tau_max };
    let end = c.t_end().ok_or(Error::EmptySeries)?;
    if tau_min < c.t0 || tau_max > end || tau_max <= tau_min {
        return Err(bad);
    }
    if model == DecayModel::PowerLaw && tau_min < 1 {
        return Err(bad);
    }

    let mut xs = Vec::with_capacity((tau_max - tau_min + 1) as usize);
    let mut ys = Vec::with_capacity(xs.capacity());
    for tau in tau_min..=tau_max {
        let v = c.at(tau).expect("lag inside series");
        if v.is_nan() || v <= 0.0 {
            return Err(Error::NonPositive { lag: tau, value: v });
        }
        xs.push(match model {
            DecayModel::Exponential => tau as f64,
            DecayModel::PowerLaw => (tau as f64).ln(),
        });
        ys.push(v.ln());
    }

    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(DecayFit {
        model,
        slope,
        intercept,
        r_squared,
    })
}

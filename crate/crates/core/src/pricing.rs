//! Prices and logarithmic returns derived from a magnetization series.
//!
//! With a constant fundamental price `p0`, `P(t) = p0 * exp(M(t))` and the
//! log return over a lag `tau` reduces to `M(t) - M(t - tau)`. Returns are
//! computed from that difference directly; [`price_series`] exists for export.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceParams {
    pub p0: f64,
}

impl Default for PriceParams {
    fn default() -> Self {
        PriceParams { p0: 1.0 }
    }
}

impl PriceParams {
    pub fn new(p0: f64) -> Result<Self> {
        let p = PriceParams { p0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p0.is_finite() && self.p0 > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParam {
                name: "p0",
                value: self.p0.to_string(),
                expected: "a finite real number > 0",
            })
        }
    }
}

/// `P(t) = p0 * exp(M(t))`.
pub fn price_series(m: &Series, p: PriceParams) -> Result<Series> {
    p.validate()?;
    if m.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(Series::new(
        m.t0,
        m.values.iter().map(|&v| p.p0 * v.exp()).collect(),
    ))
}

/// `r_tau(t) = M(t) - M(t - tau)` for every `t` with both samples present.
pub fn log_returns(m: &Series, tau: usize) -> Result<Series> {
    if tau == 0 || tau >= m.len() {
        return Err(Error::BadLag { tau, len: m.len() });
    }
    let v = &m.values;
    let r = v[tau..].iter().zip(v).map(|(now, then)| now - then).collect();
    Ok(Series::new(m.t0 + tau as i64, r))
}

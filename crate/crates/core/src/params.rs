use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// When the activity threshold `lambda * |M|` is evaluated during a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    /// Magnetization captured once at the start of each step.
    #[default]
    Frozen,
    /// Magnetization read from the running spin sum before every update.
    Live,
}

impl FromStr for ThresholdMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "frozen" => Ok(ThresholdMode::Frozen),
            "live" => Ok(ThresholdMode::Live),
            other => Err(format!(
                "unknown threshold mode `{other}`: expected `frozen` or `live`"
            )),
        }
    }
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdMode::Frozen => "frozen",
            ThresholdMode::Live => "live",
        })
    }
}

pub const DEFAULT_SIDE: usize = 32;
pub const DEFAULT_THERMALIZATION: u64 = 5000;

/// Everything needed to reproduce one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Nearest-neighbour coupling `J`.
    pub coupling: f64,
    /// Strength of the individual Gaussian opinion term.
    pub sigma: f64,
    /// Threshold coefficient; the dead zone is `lambda * |M|`.
    pub lambda: f64,
    /// Lattice side `L`.
    pub side: usize,
    pub thermalization_steps: u64,
    pub measurement_steps: u64,
    pub seed: u64,
    pub threshold_mode: ThresholdMode,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            coupling: 1.0,
            sigma: 1.0,
            lambda: 0.0,
            side: DEFAULT_SIDE,
            thermalization_steps: DEFAULT_THERMALIZATION,
            measurement_steps: 10_000,
            seed: 0,
            threshold_mode: ThresholdMode::Frozen,
        }
    }
}

impl ModelParams {
    pub fn sites(&self) -> usize {
        self.side * self.side
    }

    pub fn validate(&self) -> Result<()> {
        if !self.coupling.is_finite() {
            return Err(invalid("coupling", self.coupling, "a finite real number"));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(invalid("sigma", self.sigma, "a finite real number >= 0"));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(invalid("lambda", self.lambda, "a finite real number >= 0"));
        }
        if self.side < 2 {
            return Err(invalid("lattice-size", self.side, "an integer >= 2"));
        }
        if self.side.checked_mul(self.side).is_none() {
            return Err(invalid("lattice-size", self.side, "a side whose square fits in memory"));
        }
        if self.measurement_steps < 1 {
            return Err(invalid("steps", self.measurement_steps, "an integer >= 1"));
        }
        Ok(())
    }
}

fn invalid(name: &'static str, value: impl fmt::Display, expected: &'static str) -> Error {
    Error::InvalidParam {
        name,
        value: value.to_string(),
        expected,
    }
}

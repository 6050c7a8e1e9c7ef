use serde::{Deserialize, Serialize};

/// Ordered real samples; `t0` is the time index (or lag) of the first one.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Series {
    pub t0: i64,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(t0: i64, values: Vec<f64>) -> Self {
        Series { t0, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the last sample, or `None` for an empty series.
    pub fn t_end(&self) -> Option<i64> {
        (!self.values.is_empty()).then(|| self.t0 + self.values.len() as i64 - 1)
    }

    /// Sample at absolute index `t`.
    pub fn at(&self, t: i64) -> Option<f64> {
        let k = usize::try_from(t.checked_sub(self.t0)?).ok()?;
        self.values.get(k).copied()
    }

    /// `(t, value)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.t0 + k as i64, v))
    }
}

impl AsRef<[f64]> for Series {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

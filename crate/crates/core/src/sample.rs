use crate::error::{GeError, Result};
use serde::{Deserialize, Serialize};

/// Strictly positive, finite observations with optional provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSample")]
pub struct Sample {
    values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<String>,
}

#[derive(Deserialize)]
struct RawSample {
    values: Vec<f64>,
    label: Option<String>,
    period: Option<String>,
}

impl TryFrom<RawSample> for Sample {
    type Error = GeError;

    fn try_from(raw: RawSample) -> Result<Self> {
        let mut s = Sample::new(raw.values)?;
        s.label = raw.label;
        s.period = raw.period;
        Ok(s)
    }
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(GeError::InvalidSample("sample is empty".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(GeError::InvalidSample(format!(
                "value {v} at index {i} is not strictly positive and finite"
            )));
        }
        Ok(Sample {
            values,
            label: None,
            period: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_period(mut self, period: impl Into<String>) -> Self {
        self.period = Some(period.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn period(&self) -> Option<&str> {
        self.period.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values in ascending order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Standard deviation with the n − 1 denominator.
    pub fn sd(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        let ss: f64 = self.values.iter().map(|x| (x - m) * (x - m)).sum();
        (ss / (n - 1) as f64).sqrt()
    }

    /// Copy of the sample with every value multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut s = Sample::new(self.values.iter().map(|x| x * c).collect())?;
        s.label.clone_from(&self.label);
        s.period.clone_from(&self.period);
        Ok(s)
    }

    /// Copy of the sample without the observation at `index`.
    pub fn without(&self, index: usize) -> Result<Self> {
        let mut values = self.values.clone();
        values.remove(index);
        Sample::new(values)
    }

    /// Validates that the sample can support a two-parameter fit.
    pub(crate) fn require_fit_size(&self, method: &str) -> Result<()> {
        if self.len() < 3 {
            return Err(GeError::FitFailure {
                method: method.to_string(),
                detail: format!("need at least 3 observations, got {}", self.len()),
            });
        }
        let first = self.values[0];
        if self.values.iter().all(|v| *v == first) {
            return Err(GeError::FitFailure {
                method: method.to_string(),
                detail: "degenerate sample: all values are equal".into(),
            });
        }
        Ok(())
    }
}

//! Time series container.

use crate::error::{Error, Result};

/// A real-valued time series observed at 1-based instants `1..=N`,
/// optionally annotated with per-observation labels (dates, usually).
///
/// Values are validated once at construction: the series must be nonempty
/// and every entry finite. Downstream code can then index freely without
/// re-checking.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl TimeSeries {
    /// Wraps `values`, rejecting empty input and NaN/infinities.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        Ok(Self {
            values,
            labels: None,
        })
    }

    /// Like [`new`](Self::new), but attaches one label per observation.
    pub fn with_labels(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: labels.len(),
            });
        }
        let mut ts = Self::new(values)?;
        ts.labels = Some(labels);
        Ok(ts)
    }

    /// Per-observation labels, if any were attached.
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of observations `N`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the series holds no observations. Construction forbids
    /// this, so the answer is always `false`; provided for idiom's sake.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Read-only view of the observations.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Consumes the series, returning the underlying buffer.
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Sample mean.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance (divides by `N - 1`); zero for N = 1.
    pub fn variance(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.mean();
        self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        TimeSeries::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_finite_values() {
        let ts = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(ts.len(), 3);
        assert_eq!(ts.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_empty() {
        assert!(matches!(TimeSeries::new(vec![]), Err(Error::EmptySeries)));
    }

    #[test]
    fn rejects_nan_with_position() {
        let err = TimeSeries::new(vec![1.0, f64::NAN, 3.0]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteInput { index: 1 }));
    }

    #[test]
    fn rejects_infinity() {
        let err = TimeSeries::new(vec![1.0, 2.0, f64::INFINITY]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteInput { index: 2 }));
    }

    #[test]
    fn labels_must_match_length() {
        let ts = TimeSeries::with_labels(vec![1.0, 2.0], vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(ts.labels().unwrap(), ["a", "b"]);
        let err = TimeSeries::with_labels(vec![1.0, 2.0], vec!["a".into()]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { left: 2, right: 1 }));
    }

    #[test]
    fn sample_variance_uses_n_minus_one() {
        let ts = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((ts.mean() - 2.5).abs() < 1e-15);
        // Squared deviations 2.25 + 0.25 + 0.25 + 2.25 = 5, over 3.
        assert!((ts.variance() - 5.0 / 3.0).abs() < 1e-15);
    }
}

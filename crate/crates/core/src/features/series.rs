use crate::error::{Error, Result};

/// A packet's bytes viewed as real samples in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSeries(Vec<f64>);

impl RealSeries {
    pub fn from_bytes(bytes: &[u8]) -> Self {
        RealSeries(bytes.iter().map(|&b| f64::from(b)).collect())
    }

    /// Wraps arbitrary reals. Values must be finite and lie in `[0, 255]`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort {
                required: 1,
                actual: 0,
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.is_finite() || !(0.0..=255.0).contains(v))
        {
            return Err(Error::invalid(format!(
                "sample {i} = {} is outside [0, 255]",
                values[i]
            )));
        }
        Ok(RealSeries(values))
    }

    /// Affinely maps `values` onto `[0, 255]`. A constant input maps to 0.
    pub fn rescaled(values: &[f64]) -> Result<Self> {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        let scale = if span > 0.0 { 255.0 / span } else { 0.0 };
        RealSeries::new(values.iter().map(|v| ((v - lo) * scale).clamp(0.0, 255.0)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn require(&self, required: usize) -> Result<()> {
        if self.len() < required {
            Err(Error::SeriesTooShort {
                required,
                actual: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

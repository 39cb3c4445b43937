use super::{check_finite, Detector, DetectorKind, Outcome};
use crate::error::{Error, Result};

/// Page-Hinkley test for an upward shift of the mean.
///
/// Keeps the faded cumulative deviation `m = max(0, alpha * m + x - mean - delta)`
/// and signals drift once it exceeds `threshold`.
#[derive(Debug, Clone)]
pub struct PageHinkley {
    min_instances: usize,
    delta: f64,
    threshold: f64,
    alpha: f64,

    sample_count: usize,
    mean: f64,
    sum: f64,
    seen: usize,
}

impl Default for PageHinkley {
    fn default() -> Self {
        Self::new(30, 0.005, 50.0, 1.0 - 0.0001).expect("defaults are valid")
    }
}

impl PageHinkley {
    pub fn new(min_instances: usize, delta: f64, threshold: f64, alpha: f64) -> Result<Self> {
        if !(threshold > 0.0 && delta >= 0.0 && alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Page-Hinkley delta={delta} threshold={threshold} alpha={alpha}"
            )));
        }
        Ok(Self {
            min_instances,
            delta,
            threshold,
            alpha,
            sample_count: 1,
            mean: 0.0,
            sum: 0.0,
            seen: 0,
        })
    }

    pub fn cumulative_deviation(&self) -> f64 {
        self.sum
    }
}

impl Detector for PageHinkley {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        self.mean += (x - self.mean) / self.sample_count as f64;
        self.sum = (self.alpha * self.sum + (x - self.mean - self.delta)).max(0.0);
        self.sample_count += 1;
        if self.sample_count < self.min_instances {
            return Ok(Outcome::Normal);
        }
        Ok(if self.sum > self.threshold {
            Outcome::Drift
        } else {
            Outcome::Normal
        })
    }

    fn reset(&mut self) {
        *self = Self::new(self.min_instances, self.delta, self.threshold, self.alpha)
            .expect("parameters already validated");
    }

    fn warmup_len(&self) -> usize {
        self.min_instances.saturating_sub(2)
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::PageHinkley
    }
}

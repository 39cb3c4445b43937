//! EDDM: monitors the mean and spread of the distance (in samples) between
//! consecutive error events. Any non-zero input counts as an error event,
//! so a stream of real values with no zeros produces constant distances
//! and never fires.

use super::ddm::LevelCheck;
use super::{check_finite, Detector, DetectorKind, Outcome};
use crate::error::{Error, Result};

const MIN_NUM_INSTANCES: usize = 30;

#[derive(Debug, Clone)]
pub struct Eddm {
    min_errors: usize,
    warning_ratio: f64,
    drift_ratio: f64,

    n: usize,
    num_errors: usize,
    last_error_at: usize,
    mean: f64,
    m2: f64,
    m2s_max: f64,
    seen: usize,
    last: Option<LevelCheck>,
}

impl Default for Eddm {
    fn default() -> Self {
        Self::new(30, 0.95, 0.9).expect("default ratios are valid")
    }
}

impl Eddm {
    pub fn new(min_errors: usize, warning_ratio: f64, drift_ratio: f64) -> Result<Self> {
        if !(drift_ratio > 0.0 && drift_ratio <= warning_ratio && warning_ratio <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "EDDM ratios warning={warning_ratio} drift={drift_ratio}"
            )));
        }
        Ok(Self {
            min_errors,
            warning_ratio,
            drift_ratio,
            n: 1,
            num_errors: 0,
            last_error_at: 0,
            mean: 0.0,
            m2: 0.0,
            m2s_max: 0.0,
            seen: 0,
            last: None,
        })
    }

    pub fn last_check(&self) -> Option<LevelCheck> {
        self.last
    }

    /// Mean distance between error events.
    pub fn mean_distance(&self) -> f64 {
        self.mean
    }
}

impl Detector for Eddm {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        self.last = None;
        self.n += 1;
        if x == 0.0 {
            return Ok(Outcome::Normal);
        }
        self.num_errors += 1;
        let at = self.n - 1;
        let distance = (at - self.last_error_at) as f64;
        self.last_error_at = at;
        let old_mean = self.mean;
        self.mean += (distance - self.mean) / self.num_errors as f64;
        self.m2 += (distance - self.mean) * (distance - old_mean);
        let std = (self.m2 / self.num_errors as f64).sqrt();
        let m2s = self.mean + 2.0 * std;
        if self.n < MIN_NUM_INSTANCES {
            return Ok(Outcome::Normal);
        }
        if m2s > self.m2s_max {
            self.m2s_max = m2s;
            return Ok(Outcome::Normal);
        }
        let ratio = m2s / self.m2s_max;
        let enough = self.num_errors > self.min_errors;
        let check = LevelCheck {
            warning: enough && ratio < self.warning_ratio,
            drift: enough && ratio < self.drift_ratio,
        };
        self.last = Some(check);
        Ok(if check.drift {
            Outcome::Drift
        } else if check.warning {
            Outcome::Warning
        } else {
            Outcome::Normal
        })
    }

    fn reset(&mut self) {
        *self = Self::new(self.min_errors, self.warning_ratio, self.drift_ratio)
            .expect("ratios already validated");
    }

    fn warmup_len(&self) -> usize {
        (MIN_NUM_INSTANCES - 1).max(self.min_errors)
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::Eddm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn raw_prices_are_inert() {
        let mut d = Eddm::default();
        for t in 0..2000 {
            let price = 250.0 + (t as f64 * 0.1).cos() * 30.0;
            assert_eq!(d.update(price).unwrap(), Outcome::Normal);
        }
        assert_eq!(d.mean_distance(), 1.0);
    }

    #[test]
    fn shrinking_error_distance_is_detected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut d = Eddm::default();
        let mut drifts = Vec::new();
        for t in 0..4000 {
            let p = if t < 3000 { 0.05 } else { 0.5 };
            if d.update(if rng.random_bool(p) { 1.0 } else { 0.0 })
                .unwrap()
                == Outcome::Drift
            {
                drifts.push(t);
                d.reset();
            }
        }
        assert!(
            drifts.iter().any(|t| (3000..3300).contains(t)),
            "{drifts:?}"
        );
    }

    proptest! {
        #[test]
        fn drift_implies_warning(seed in any::<u64>(), p0 in 0.01f64..0.3, p1 in 0.01f64..1.0) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut d = Eddm::default();
            for t in 0..2000 {
                let p = if t < 1000 { p0 } else { p1 };
                if d.update(if rng.random_bool(p) { 1.0 } else { 0.0 }).unwrap() == Outcome::Drift {
                    prop_assert!(d.last_check().unwrap().warning);
                    d.reset();
                }
            }
        }
    }
}

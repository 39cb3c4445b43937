//! DDM: tracks the running mean `p` of the inputs and the Bernoulli
//! deviation `s = sqrt(p(1-p)/n)`, remembering the `(p, s)` pair with the
//! smallest `p + s`.
//!
//! Inputs outside `[0, 1]` make `p(1-p)` negative. The deviation is then
//! undefined and the step makes no decision and does not touch the stored
//! minimum, so the detector stays inert on raw price levels.

use super::{check_finite, Detector, DetectorKind, Outcome};
use crate::error::{Error, Result};

/// Result of the last level comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LevelCheck {
    pub warning: bool,
    pub drift: bool,
}

#[derive(Debug, Clone)]
pub struct Ddm {
    min_instances: usize,
    warning_level: f64,
    drift_level: f64,

    sample_count: usize,
    miss_prob: f64,
    prob_min: f64,
    sd_min: f64,
    prob_sd_min: f64,
    seen: usize,
    last: Option<LevelCheck>,
}

impl Default for Ddm {
    fn default() -> Self {
        Self::new(30, 2.0, 3.0).expect("default levels are valid")
    }
}

impl Ddm {
    pub fn new(min_instances: usize, warning_level: f64, drift_level: f64) -> Result<Self> {
        if !(warning_level > 0.0 && drift_level >= warning_level) {
            return Err(Error::InvalidParameter(format!(
                "DDM levels warning={warning_level} drift={drift_level}"
            )));
        }
        Ok(Self {
            min_instances,
            warning_level,
            drift_level,
            sample_count: 1,
            miss_prob: 1.0,
            prob_min: f64::INFINITY,
            sd_min: f64::INFINITY,
            prob_sd_min: f64::INFINITY,
            seen: 0,
            last: None,
        })
    }

    /// Level comparison made by the last update, if it made one.
    pub fn last_check(&self) -> Option<LevelCheck> {
        self.last
    }

    pub fn running_mean(&self) -> f64 {
        self.miss_prob
    }
}

impl Detector for Ddm {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        self.last = None;
        let n = self.sample_count as f64;
        self.miss_prob += (x - self.miss_prob) / n;
        let var = self.miss_prob * (1.0 - self.miss_prob) / n;
        self.sample_count += 1;
        if self.sample_count < self.min_instances || var < 0.0 {
            return Ok(Outcome::Normal);
        }
        let std = var.sqrt();
        let level = self.miss_prob + std;
        if level <= self.prob_sd_min {
            self.prob_min = self.miss_prob;
            self.sd_min = std;
            self.prob_sd_min = level;
        }
        let check = LevelCheck {
            warning: level > self.prob_min + self.warning_level * self.sd_min,
            drift: level > self.prob_min + self.drift_level * self.sd_min,
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
        *self = Self::new(self.min_instances, self.warning_level, self.drift_level)
            .expect("levels already validated");
    }

    fn warmup_len(&self) -> usize {
        self.min_instances.saturating_sub(2)
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::Ddm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn raw_prices_are_inert() {
        let mut d = Ddm::default();
        for t in 0..2000 {
            let price = 200.0 + 170.0 * (t as f64 / 2000.0) + (t as f64 * 0.7).sin() * 5.0;
            assert_eq!(d.update(price).unwrap(), Outcome::Normal);
        }
        assert!(d.last_check().is_none());
    }

    #[test]
    fn error_rate_jump_is_detected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut d = Ddm::default();
        let mut drift_at = None;
        for t in 0..3000 {
            let p = if t < 1000 { 0.1 } else { 0.6 };
            let x = if rng.random_bool(p) { 1.0 } else { 0.0 };
            if d.update(x).unwrap() == Outcome::Drift {
                drift_at = Some(t);
                break;
            }
        }
        let t = drift_at.expect("drift found");
        assert!((1000..1200).contains(&t), "{t}");
    }

    #[test]
    fn all_correct_prefix_does_not_fire() {
        let mut d = Ddm::default();
        for _ in 0..100 {
            assert_eq!(d.update(0.0).unwrap(), Outcome::Normal);
        }
    }

    proptest! {
        #[test]
        fn drift_implies_warning(seed in any::<u64>(), p0 in 0.0f64..0.5, p1 in 0.0f64..1.0) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut d = Ddm::default();
            for t in 0..1500 {
                let p = if t < 500 { p0 } else { p1 };
                let out = d.update(if rng.random_bool(p) { 1.0 } else { 0.0 }).unwrap();
                if out == Outcome::Drift {
                    prop_assert!(d.last_check().unwrap().warning);
                    d.reset();
                }
            }
        }
    }
}

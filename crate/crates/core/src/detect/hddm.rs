//! HDDM detectors. `HddmA` compares running averages against the best
//! historical cut point using Hoeffding's bound; `HddmW` does the same on
//! exponentially weighted averages using McDiarmid's bound. Both run the
//! test in both directions.

use super::{check_finite, Detector, DetectorKind, Outcome};
use crate::error::{Error, Result};

fn validate(drift_confidence: f64, warning_confidence: f64) -> Result<()> {
    if !(drift_confidence > 0.0
        && drift_confidence < 1.0
        && warning_confidence > 0.0
        && warning_confidence < 1.0)
    {
        return Err(Error::InvalidParameter(format!(
            "HDDM confidences drift={drift_confidence} warning={warning_confidence}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct HddmA {
    drift_confidence: f64,
    warning_confidence: f64,

    n_min: f64,
    c_min: f64,
    n_max: f64,
    c_max: f64,
    total_n: f64,
    total_c: f64,
    seen: usize,
}

impl Default for HddmA {
    fn default() -> Self {
        Self::new(0.001, 0.005).expect("defaults are valid")
    }
}

impl HddmA {
    pub fn new(drift_confidence: f64, warning_confidence: f64) -> Result<Self> {
        validate(drift_confidence, warning_confidence)?;
        Ok(Self {
            drift_confidence,
            warning_confidence,
            n_min: 0.0,
            c_min: 0.0,
            n_max: 0.0,
            c_max: 0.0,
            total_n: 0.0,
            total_c: 0.0,
            seen: 0,
        })
    }

    /// `mean(total) - mean(prefix)` exceeds the Hoeffding bound for the
    /// split at `n_prefix`.
    fn shift_exceeds(&self, n_prefix: f64, diff: f64, confidence: f64) -> bool {
        if n_prefix == self.total_n {
            return false;
        }
        let m = (self.total_n - n_prefix) / n_prefix * (1.0 / self.total_n);
        let bound = (m / 2.0 * (2.0 / confidence).ln()).sqrt();
        diff >= bound
    }

    fn clear_statistics(&mut self) {
        self.n_min = 0.0;
        self.c_min = 0.0;
        self.n_max = 0.0;
        self.c_max = 0.0;
        self.total_n = 0.0;
        self.total_c = 0.0;
    }
}

impl Detector for HddmA {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        self.total_n += 1.0;
        self.total_c += x;
        if self.n_min == 0.0 {
            self.n_min = self.total_n;
            self.c_min = self.total_c;
        }
        if self.n_max == 0.0 {
            self.n_max = self.total_n;
            self.c_max = self.total_c;
        }
        let log_drift = (1.0 / self.drift_confidence).ln();
        let mean = self.total_c / self.total_n;
        let cota_total = (1.0 / (2.0 * self.total_n) * log_drift).sqrt();
        let cota = (1.0 / (2.0 * self.n_min) * log_drift).sqrt();
        if self.c_min / self.n_min + cota >= mean + cota_total {
            self.c_min = self.total_c;
            self.n_min = self.total_n;
        }
        let cota = (1.0 / (2.0 * self.n_max) * log_drift).sqrt();
        if self.c_max / self.n_max - cota <= mean - cota_total {
            self.c_max = self.total_c;
            self.n_max = self.total_n;
        }

        let incr = mean - self.c_min / self.n_min;
        let decr = self.c_max / self.n_max - mean;
        let outcome = if self.shift_exceeds(self.n_min, incr, self.drift_confidence)
            || self.shift_exceeds(self.n_max, decr, self.drift_confidence)
        {
            self.clear_statistics();
            Outcome::Drift
        } else if self.shift_exceeds(self.n_min, incr, self.warning_confidence)
            || self.shift_exceeds(self.n_max, decr, self.warning_confidence)
        {
            Outcome::Warning
        } else {
            Outcome::Normal
        };
        Ok(outcome)
    }

    fn reset(&mut self) {
        *self =
            Self::new(self.drift_confidence, self.warning_confidence).expect("already validated");
    }

    fn warmup_len(&self) -> usize {
        1
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::HddmA
    }
}

/// Exponentially weighted average with the sum of squared weights used by
/// McDiarmid's bound.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Ewma {
    estimate: Option<f64>,
    weight_sq_sum: f64,
}

impl Ewma {
    fn push(&mut self, x: f64, lambda: f64) {
        let decay = 1.0 - lambda;
        match self.estimate {
            None => {
                self.estimate = Some(x);
                self.weight_sq_sum = 1.0;
            }
            Some(e) => {
                self.estimate = Some(lambda * x + decay * e);
                self.weight_sq_sum = lambda * lambda + decay * decay * self.weight_sq_sum;
            }
        }
    }
}

/// `later` exceeds `earlier` by more than the McDiarmid bound.
fn ewma_increase(earlier: &Ewma, later: &Ewma, confidence: f64) -> bool {
    match (earlier.estimate, later.estimate) {
        (Some(a), Some(b)) => {
            let bound = ((earlier.weight_sq_sum + later.weight_sq_sum) * (1.0 / confidence).ln()
                / 2.0)
                .sqrt();
            b - a > bound
        }
        _ => false,
    }
}

#[derive(Debug, Clone)]
pub struct HddmW {
    drift_confidence: f64,
    warning_confidence: f64,
    lambda: f64,

    total: Ewma,
    incr_cut: Ewma,
    incr_since: Ewma,
    decr_cut: Ewma,
    decr_since: Ewma,
    incr_cutpoint: f64,
    decr_cutpoint: f64,
    seen: usize,
}

impl Default for HddmW {
    fn default() -> Self {
        Self::new(0.001, 0.005, 0.05).expect("defaults are valid")
    }
}

impl HddmW {
    pub fn new(drift_confidence: f64, warning_confidence: f64, lambda: f64) -> Result<Self> {
        validate(drift_confidence, warning_confidence)?;
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "HDDM_W lambda {lambda} not in (0, 1)"
            )));
        }
        Ok(Self {
            drift_confidence,
            warning_confidence,
            lambda,
            total: Ewma::default(),
            incr_cut: Ewma::default(),
            incr_since: Ewma::default(),
            decr_cut: Ewma::default(),
            decr_since: Ewma::default(),
            incr_cutpoint: f64::INFINITY,
            decr_cutpoint: f64::NEG_INFINITY,
            seen: 0,
        })
    }

    fn epsilon(&self) -> f64 {
        (self.total.weight_sq_sum * (1.0 / self.drift_confidence).ln() / 2.0).sqrt()
    }

    fn update_increase_monitor(&mut self, x: f64) {
        let est = self.total.estimate.expect("total updated first");
        let eps = self.epsilon();
        if est + eps < self.incr_cutpoint {
            self.incr_cutpoint = est + eps;
            self.incr_cut = self.total;
            self.incr_since = Ewma::default();
        } else {
            self.incr_since.push(x, self.lambda);
        }
    }

    fn update_decrease_monitor(&mut self, x: f64) {
        let est = self.total.estimate.expect("total updated first");
        let eps = self.epsilon();
        if est - eps > self.decr_cutpoint {
            self.decr_cutpoint = est - eps;
            self.decr_cut = self.total;
            self.decr_since = Ewma::default();
        } else {
            self.decr_since.push(x, self.lambda);
        }
    }

    fn clear_statistics(&mut self) {
        *self = Self {
            seen: self.seen,
            ..Self::new(self.drift_confidence, self.warning_confidence, self.lambda)
                .expect("already validated")
        };
    }
}

impl Detector for HddmW {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        self.total.push(x, self.lambda);
        self.update_increase_monitor(x);
        self.update_decrease_monitor(x);

        let increased = |c| ewma_increase(&self.incr_cut, &self.incr_since, c);
        let decreased = |c| ewma_increase(&self.decr_since, &self.decr_cut, c);
        let outcome = if increased(self.drift_confidence) || decreased(self.drift_confidence) {
            Outcome::Drift
        } else if increased(self.warning_confidence) || decreased(self.warning_confidence) {
            Outcome::Warning
        } else {
            Outcome::Normal
        };
        if outcome == Outcome::Drift {
            self.clear_statistics();
        }
        Ok(outcome)
    }

    fn reset(&mut self) {
        *self = Self::new(self.drift_confidence, self.warning_confidence, self.lambda)
            .expect("already validated");
    }

    fn warmup_len(&self) -> usize {
        1
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::HddmW
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn bernoulli_shift(seed: u64, p0: f64, p1: f64, at: usize, len: usize) -> Vec<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..len)
            .map(|t| {
                let p = if t < at { p0 } else { p1 };
                if rng.random_bool(p) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }

    fn first_drift(d: &mut dyn Detector, xs: &[f64], from: usize) -> Option<usize> {
        let mut found = None;
        for (t, &x) in xs.iter().enumerate() {
            if d.update(x).unwrap() == Outcome::Drift {
                if t >= from && found.is_none() {
                    found = Some(t);
                }
                d.reset();
            }
        }
        found
    }

    #[test]
    fn both_detect_increase_and_decrease() {
        for (p0, p1) in [(0.1, 0.7), (0.8, 0.2)] {
            let xs = bernoulli_shift(3, p0, p1, 1000, 1600);
            let a = first_drift(&mut HddmA::default(), &xs, 1000).expect("HDDM_A");
            let w = first_drift(&mut HddmW::default(), &xs, 1000).expect("HDDM_W");
            assert!(a < 1150, "HDDM_A at {a}");
            assert!(w < 1150, "HDDM_W at {w}");
        }
    }

    #[test]
    fn constant_stream_is_quiet() {
        let mut a = HddmA::default();
        let mut w = HddmW::default();
        for _ in 0..3000 {
            assert_eq!(a.update(0.3).unwrap(), Outcome::Normal);
            assert_eq!(w.update(0.3).unwrap(), Outcome::Normal);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(HddmA::new(0.0, 0.005).is_err());
        assert!(HddmW::new(0.001, 0.005, 1.0).is_err());
    }
}

//! ADWIN: adaptive windowing over an exponential histogram of buckets.
//!
//! Bucket row `i` holds buckets summarizing `2^i` consecutive values, the
//! newest row first. Every `clock` updates the window is scanned from the
//! oldest bucket towards the newest, and the oldest bucket is dropped as
//! long as some split into old/new sub-windows has means further apart
//! than the cut threshold.

use std::collections::VecDeque;

use super::{check_finite, Detector, DetectorKind, Outcome};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bucket {
    total: f64,
    variance: f64,
}

#[derive(Debug, Clone)]
pub struct Adwin {
    delta: f64,
    clock: usize,
    max_buckets: usize,
    min_window_length: usize,
    min_width_to_check: usize,

    rows: Vec<VecDeque<Bucket>>,
    total: f64,
    variance: f64,
    width: usize,
    time: usize,
    seen: usize,
    dropped: usize,
}

impl Default for Adwin {
    fn default() -> Self {
        Self::new(0.002).expect("default delta is valid")
    }
}

impl Adwin {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ADWIN delta {delta} not in (0, 1)"
            )));
        }
        Ok(Self {
            delta,
            clock: 32,
            max_buckets: 5,
            min_window_length: 5,
            min_width_to_check: 10,
            rows: Vec::new(),
            total: 0.0,
            variance: 0.0,
            width: 0,
            time: 0,
            seen: 0,
            dropped: 0,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of values currently summarized by the window.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Values dropped from the old end of the window since the last reset.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn mean(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            self.total / self.width as f64
        }
    }

    fn insert(&mut self, x: f64) {
        self.width += 1;
        if self.width > 1 {
            let n = self.width as f64;
            let prev_mean = self.total / (n - 1.0);
            self.variance += (n - 1.0) * (x - prev_mean) * (x - prev_mean) / n;
        }
        self.total += x;
        if self.rows.is_empty() {
            self.rows.push(VecDeque::new());
        }
        self.rows[0].push_back(Bucket {
            total: x,
            variance: 0.0,
        });
        self.compress();
    }

    fn compress(&mut self) {
        let mut i = 0;
        while i < self.rows.len() && self.rows[i].len() > self.max_buckets {
            let size = (1usize << i) as f64;
            let a = self.rows[i].pop_front().expect("row overfull");
            let b = self.rows[i].pop_front().expect("row overfull");
            let diff = a.total / size - b.total / size;
            let merged = Bucket {
                total: a.total + b.total,
                variance: a.variance + b.variance + size * size * diff * diff / (2.0 * size),
            };
            if i + 1 == self.rows.len() {
                self.rows.push(VecDeque::new());
            }
            self.rows[i + 1].push_back(merged);
            i += 1;
        }
    }

    /// Removes the oldest bucket, returning how many values it held.
    fn delete_oldest(&mut self) -> usize {
        let row = self.rows.len() - 1;
        let bucket = self.rows[row].pop_front().expect("last row non-empty");
        let n1 = 1usize << row;
        self.width -= n1;
        self.total -= bucket.total;
        let w = self.width as f64;
        let n1f = n1 as f64;
        let diff = bucket.total / n1f - if w > 0.0 { self.total / w } else { 0.0 };
        self.variance -= bucket.variance + n1f * w * diff * diff / (n1f + w);
        if self.variance < 0.0 {
            self.variance = 0.0;
        }
        if self.rows[row].is_empty() {
            self.rows.pop();
        }
        self.dropped += n1;
        n1
    }

    fn cut(&self, n0: f64, n1: f64, mean_diff: f64) -> bool {
        let n = self.width as f64;
        let dd = (2.0 * n.ln() / self.delta).ln();
        let v = self.variance / n;
        let min_len = self.min_window_length as f64;
        let m = 1.0 / (n0 - min_len + 1.0) + 1.0 / (n1 - min_len + 1.0);
        let epsilon = (2.0 * m * v * dd).sqrt() + 2.0 / 3.0 * dd * m;
        mean_diff.abs() > epsilon
    }

    fn detect_change(&mut self) -> bool {
        self.time += 1;
        if !self.time.is_multiple_of(self.clock) || self.width <= self.min_width_to_check {
            return false;
        }
        let mut changed = false;
        let mut reduce = true;
        while reduce {
            reduce = false;
            let (mut n0, mut n1) = (0.0, self.width as f64);
            let (mut u0, mut u1) = (0.0, self.total);
            'scan: for row in (0..self.rows.len()).rev() {
                let size = (1usize << row) as f64;
                let len = self.rows[row].len();
                for k in 0..len {
                    let bucket_total = self.rows[row][k].total;
                    n0 += size;
                    n1 -= size;
                    u0 += bucket_total;
                    u1 -= bucket_total;
                    if row == 0 && k == len - 1 {
                        break 'scan;
                    }
                    let min_len = self.min_window_length as f64;
                    if n1 >= min_len && n0 >= min_len && self.cut(n0, n1, u0 / n0 - u1 / n1) {
                        changed = true;
                        if self.width > 0 {
                            self.delete_oldest();
                            reduce = true;
                        }
                        break 'scan;
                    }
                }
            }
        }
        changed
    }
}

impl Detector for Adwin {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        self.insert(x);
        Ok(if self.detect_change() {
            Outcome::Drift
        } else {
            Outcome::Normal
        })
    }

    fn reset(&mut self) {
        *self = Self::new(self.delta).expect("delta already validated");
    }

    fn warmup_len(&self) -> usize {
        self.clock - 1
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::Adwin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rejects_bad_delta() {
        assert!(Adwin::new(0.0).is_err());
        assert!(Adwin::new(1.5).is_err());
    }

    #[test]
    fn stationary_constant_keeps_window() {
        let mut a = Adwin::default();
        for _ in 0..1000 {
            assert_eq!(a.update(0.5).unwrap(), Outcome::Normal);
        }
        assert_eq!(a.width(), 1000);
        assert!((a.mean() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn detects_mean_shift() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut a = Adwin::default();
        let mut first = None;
        for t in 0..1000 {
            let p = if t < 500 { 0.2 } else { 0.8 };
            let x = if rng.random_bool(p) { 1.0 } else { 0.0 };
            if a.update(x).unwrap() == Outcome::Drift && t >= 500 && first.is_none() {
                first = Some(t);
            }
        }
        let t = first.expect("shift detected");
        assert!(t < 600, "detected at {t}");
        // the shrunk window no longer spans the old regime
        assert!(a.width() < 500 + 500);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// The histogram always summarizes exactly the newest `width` inputs.
        #[test]
        fn window_matches_naive_list(seed in any::<u64>(), shift in 0.0f64..1.0) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut a = Adwin::default();
            let mut history = Vec::new();
            for t in 0..1500 {
                let x = if t < 700 { rng.random::<f64>() } else { rng.random::<f64>() + shift };
                history.push(x);
                a.update(x).unwrap();
                prop_assert_eq!(a.width() + a.dropped(), history.len());
                let naive: f64 = history[a.dropped()..].iter().sum();
                prop_assert!((naive - a.total()).abs() < 1e-8 * history.len() as f64);
                let rows_width: usize = a.rows.iter().enumerate().map(|(i, r)| r.len() << i).sum();
                prop_assert_eq!(rows_width, a.width());
                prop_assert!(a.rows.iter().all(|r| r.len() <= a.max_buckets));
            }
        }
    }
}

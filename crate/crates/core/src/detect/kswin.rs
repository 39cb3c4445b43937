//! KSWIN: two-sample Kolmogorov-Smirnov test between the newest values of
//! a sliding window and a uniform random sample (with replacement) of the
//! older part of the same window.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_finite, Detector, DetectorKind, Outcome};
use crate::error::{Error, Result};

/// Minimum statistic required alongside a significant p-value.
const MIN_STATISTIC: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct Kswin {
    alpha: f64,
    window_size: usize,
    stat_size: usize,
    seed: u64,

    window: VecDeque<f64>,
    rng: ChaCha8Rng,
    seen: usize,
    last_p_value: Option<f64>,
}

impl Kswin {
    pub fn new(alpha: f64, window_size: usize, stat_size: usize, seed: u64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "KSWIN alpha {alpha} not in (0, 1)"
            )));
        }
        if stat_size == 0 || window_size <= 2 * stat_size {
            return Err(Error::InvalidParameter(format!(
                "KSWIN window {window_size} must exceed twice the stat size {stat_size}"
            )));
        }
        Ok(Self {
            alpha,
            window_size,
            stat_size,
            seed,
            window: VecDeque::with_capacity(window_size + 1),
            rng: ChaCha8Rng::seed_from_u64(seed),
            seen: 0,
            last_p_value: None,
        })
    }

    /// Default parameters (`alpha = 0.005`, window 100, stat size 30).
    pub fn with_seed(seed: u64) -> Self {
        Self::new(0.005, 100, 30, seed).expect("defaults are valid")
    }

    pub fn last_p_value(&self) -> Option<f64> {
        self.last_p_value
    }
}

impl Detector for Kswin {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        let mut drift = false;
        if self.window.len() >= self.window_size {
            self.window.pop_front();
            let older = self.window.len() - self.stat_size;
            let sample: Vec<f64> = (0..self.stat_size)
                .map(|_| self.window[self.rng.random_range(0..older)])
                .collect();
            let recent: Vec<f64> = self.window.range(older..).copied().collect();
            let stat = ks_statistic(&sample, &recent);
            let p = ks_p_value(stat, sample.len(), recent.len());
            self.last_p_value = Some(p);
            if p < self.alpha && stat > MIN_STATISTIC {
                drift = true;
                self.window.drain(..older);
            }
        }
        self.window.push_back(x);
        Ok(if drift {
            Outcome::Drift
        } else {
            Outcome::Normal
        })
    }

    fn reset(&mut self) {
        *self = Self::new(self.alpha, self.window_size, self.stat_size, self.seed)
            .expect("parameters already validated");
    }

    fn warmup_len(&self) -> usize {
        self.window_size
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::Kswin
    }
}

/// Largest distance between the empirical CDFs of `a` and `b`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic two-sample p-value of statistic `d` for sample sizes `n`, `m`.
pub fn ks_p_value(d: f64, n: usize, m: usize) -> f64 {
    let en = ((n * m) as f64 / (n + m) as f64).sqrt();
    kolmogorov_q((en + 0.12 + 0.11 / en) * d)
}

/// Survival function of the Kolmogorov distribution,
/// `2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lambda^2)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let a2 = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut prev_term = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = sign * 2.0 * (a2 * jf * jf).exp();
        sum += term;
        if term.abs() <= 1e-12 * prev_term || term.abs() <= 1e-300 {
            return sum.clamp(0.0, 1.0);
        }
        sign = -sign;
        prev_term = term.abs();
    }
    1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_critical_values() {
        // classic 5% and 1% critical values of the Kolmogorov distribution
        assert!((kolmogorov_q(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_q(1.6276) - 0.01).abs() < 1e-4);
        assert_eq!(kolmogorov_q(0.0), 1.0);
        let mut last = 1.0;
        for i in 1..400 {
            let q = kolmogorov_q(i as f64 * 0.01);
            assert!(q <= last + 1e-12 && (0.0..=1.0).contains(&q));
            last = q;
        }
    }

    #[test]
    fn statistic_by_hand() {
        assert_eq!(ks_statistic(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(ks_statistic(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        // cdf_a jumps to 1/2 at 1, cdf_b still 0 -> then 1 vs 1/2 at 2
        assert_eq!(ks_statistic(&[1.0, 3.0], &[2.0, 3.0]), 0.5);
        // ties across samples move together
        assert_eq!(ks_statistic(&[1.0, 1.0, 2.0, 2.0], &[1.0, 2.0]), 0.0);
    }

    #[test]
    fn detects_level_shift_and_replays() {
        let xs: Vec<f64> = (0..600)
            .map(|t| (t as f64 * 1.7).sin() + if t >= 300 { 5.0 } else { 0.0 })
            .collect();
        let mut d = Kswin::with_seed(42);
        let first: Vec<Outcome> = xs.iter().map(|&x| d.update(x).unwrap()).collect();
        let t = first
            .iter()
            .position(|o| *o == Outcome::Drift)
            .expect("drift");
        assert!((300..340).contains(&t), "{t}");
        d.reset();
        let second: Vec<Outcome> = xs.iter().map(|&x| d.update(x).unwrap()).collect();
        assert_eq!(first, second);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Kswin::new(0.0, 100, 30, 0).is_err());
        assert!(Kswin::new(0.01, 50, 30, 0).is_err());
    }
}

//! Window-based detectors built for price series: trend angle
//! classification (`myTanDD`), a minimum-deviation band around the window
//! mean (`MINPS`) and a deviation blow-up test (`mySD`).
//!
//! All three fill a [`DriftWindow`] of 20 values before deciding anything
//! and never emit [`Outcome::Warning`].

use super::window::{DriftWindow, DD_WINDOW};
use super::{check_finite, Detector, DetectorKind, Outcome};
use crate::error::Result;

/// Half-width of the flat band, in degrees.
pub const FLAT_BAND_DEG: f64 = 6.0;

/// Floor applied to the minimum standard deviation.
pub const SMIN_FLOOR: f64 = 1e-9;

/// Market phase of a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trend {
    Flat,
    Bull,
    Bear,
}

/// Angle (degrees) of the window's fitted line and the resulting phase.
///
/// The slope is normalized by the fitted start value so that a rise of
/// 10% across the window gives `atan(0.10)`. Returns `None` when the fitted
/// start value is not positive.
pub fn classify_window(window: &DriftWindow) -> Option<(f64, Trend)> {
    let (slope, intercept) = window.ols_line();
    if intercept.is_nan() || intercept <= 0.0 {
        return None;
    }
    let rel = slope * (window.len() - 1) as f64 / intercept;
    let angle = rel.atan().to_degrees();
    let trend = if angle >= FLAT_BAND_DEG {
        Trend::Bull
    } else if angle <= -FLAT_BAND_DEG {
        Trend::Bear
    } else {
        Trend::Flat
    };
    Some((angle, trend))
}

/// Signals drift whenever the window's trend classification changes.
#[derive(Debug, Clone, Default)]
pub struct TanDd {
    window: DriftWindow,
    current: Option<Trend>,
    seen: usize,
}

impl TanDd {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn current_trend(&self) -> Option<Trend> {
        self.current
    }
}

impl Detector for TanDd {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        if !self.window.is_full() {
            self.window.push(x);
            return Ok(Outcome::Normal);
        }
        self.window.push(x);
        let Some((_, trend)) = classify_window(&self.window) else {
            return Ok(Outcome::Normal);
        };
        let changed = self.current.is_some_and(|c| c != trend);
        self.current = Some(trend);
        Ok(if changed {
            Outcome::Drift
        } else {
            Outcome::Normal
        })
    }

    fn reset(&mut self) {
        *self = Self::default();
    }

    fn warmup_len(&self) -> usize {
        DD_WINDOW
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::TanDd
    }
}

/// Tests each incoming value against `mean ± 3 * s_min` of the window
/// before it is inserted.
#[derive(Debug, Clone)]
pub struct Minps {
    window: DriftWindow,
    s_min: f64,
    mean: f64,
    seen: usize,
}

impl Default for Minps {
    fn default() -> Self {
        Self {
            window: DriftWindow::default(),
            s_min: f64::INFINITY,
            mean: f64::NAN,
            seen: 0,
        }
    }
}

impl Minps {
    pub fn new() -> Self {
        Self::default()
    }

    /// Smallest window standard deviation seen, `None` during warm-up.
    pub fn s_min(&self) -> Option<f64> {
        self.s_min.is_finite().then_some(self.s_min)
    }

    /// Window mean used by the last decision.
    pub fn mean(&self) -> Option<f64> {
        self.mean.is_finite().then_some(self.mean)
    }
}

impl Detector for Minps {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        if !self.window.is_full() {
            self.window.push(x);
            return Ok(Outcome::Normal);
        }
        self.mean = self.window.mean();
        let s = self.window.std();
        self.s_min = self.s_min.min(s).max(SMIN_FLOOR);
        let drift = (x - self.mean).abs() > 3.0 * self.s_min;
        self.window.push(x);
        Ok(if drift {
            Outcome::Drift
        } else {
            Outcome::Normal
        })
    }

    fn reset(&mut self) {
        *self = Self::default();
    }

    fn warmup_len(&self) -> usize {
        DD_WINDOW
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::Minps
    }
}

/// Signals drift when the window standard deviation, including the new
/// value, exceeds three times the smallest deviation seen before it.
#[derive(Debug, Clone)]
pub struct MySd {
    window: DriftWindow,
    s_min: f64,
    seen: usize,
}

impl Default for MySd {
    fn default() -> Self {
        Self {
            window: DriftWindow::default(),
            s_min: f64::INFINITY,
            seen: 0,
        }
    }
}

impl MySd {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn s_min(&self) -> Option<f64> {
        self.s_min.is_finite().then_some(self.s_min)
    }
}

impl Detector for MySd {
    fn update(&mut self, x: f64) -> Result<Outcome> {
        check_finite(x)?;
        self.seen += 1;
        if !self.window.is_full() {
            self.window.push(x);
            return Ok(Outcome::Normal);
        }
        self.window.push(x);
        let s = self.window.std();
        let drift = s > 3.0 * self.s_min;
        self.s_min = self.s_min.min(s).max(SMIN_FLOOR);
        Ok(if drift {
            Outcome::Drift
        } else {
            Outcome::Normal
        })
    }

    fn reset(&mut self) {
        *self = Self::default();
    }

    fn warmup_len(&self) -> usize {
        DD_WINDOW
    }

    fn seen(&self) -> usize {
        self.seen
    }

    fn kind(&self) -> DetectorKind {
        DetectorKind::MySd
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn linear_window(from: f64, to: f64) -> DriftWindow {
        let mut w = DriftWindow::default();
        for i in 0..DD_WINDOW {
            w.push(from + (to - from) * i as f64 / (DD_WINDOW - 1) as f64);
        }
        w
    }

    fn feed(d: &mut dyn Detector, xs: &[f64]) -> Vec<Outcome> {
        xs.iter().map(|&x| d.update(x).unwrap()).collect()
    }

    #[test]
    fn ten_percent_rise_is_flat() {
        let (angle, trend) = classify_window(&linear_window(100.0, 110.0)).unwrap();
        assert!((angle - 0.10f64.atan().to_degrees()).abs() < 1e-9);
        assert!((angle - 5.71).abs() < 0.005);
        assert_eq!(trend, Trend::Flat);
    }

    #[test]
    fn constant_window_is_flat() {
        let (angle, trend) = classify_window(&linear_window(100.0, 100.0)).unwrap();
        assert_eq!(angle, 0.0);
        assert_eq!(trend, Trend::Flat);
    }

    #[test]
    fn fifteen_percent_rise_is_bull_and_fall_is_bear() {
        let (angle, trend) = classify_window(&linear_window(100.0, 115.0)).unwrap();
        assert!((angle - 8.53).abs() < 0.005, "{angle}");
        assert_eq!(trend, Trend::Bull);
        let (angle, trend) = classify_window(&linear_window(115.0, 100.0)).unwrap();
        assert!(angle < -6.0);
        assert_eq!(trend, Trend::Bear);
    }

    #[test]
    fn boundary_angle_joins_directional_class() {
        let rel = FLAT_BAND_DEG.to_radians().tan();
        // nudge upward so rounding cannot land just inside the band
        let (angle, trend) =
            classify_window(&linear_window(100.0, 100.0 * (1.0 + rel) + 1e-9)).unwrap();
        assert!((angle - FLAT_BAND_DEG).abs() < 1e-6);
        assert_eq!(trend, Trend::Bull);
    }

    #[test]
    fn non_positive_start_is_skipped() {
        assert!(classify_window(&linear_window(-5.0, 10.0)).is_none());
    }

    #[test]
    fn tandd_flat_to_bull_drifts() {
        let mut d = TanDd::new();
        let mut xs = vec![100.0; DD_WINDOW + 1];
        // the steep line eventually fills the whole window
        xs.extend((0..DD_WINDOW).map(|i| 100.0 + 15.0 * i as f64 / (DD_WINDOW - 1) as f64));
        let out = feed(&mut d, &xs);
        assert!(out[..=DD_WINDOW].iter().all(|o| *o == Outcome::Normal));
        assert_eq!(d.current_trend(), Some(Trend::Bull));
        assert_eq!(out.iter().filter(|o| **o == Outcome::Drift).count(), 1);
    }

    #[test]
    fn first_classification_is_baseline() {
        let mut d = TanDd::new();
        let xs: Vec<f64> = (0..=DD_WINDOW).map(|i| 100.0 + 2.0 * i as f64).collect();
        let out = feed(&mut d, &xs);
        assert!(out.iter().all(|o| *o == Outcome::Normal));
        assert_eq!(d.current_trend(), Some(Trend::Bull));
    }

    #[test]
    fn minps_three_sigma_rule() {
        // mean 10, population std 1
        let base: Vec<f64> = (0..DD_WINDOW)
            .map(|i| if i % 2 == 0 { 9.0 } else { 11.0 })
            .collect();
        let mut d = Minps::new();
        assert!(feed(&mut d, &base).iter().all(|o| *o == Outcome::Normal));
        assert_eq!(d.update(14.0).unwrap(), Outcome::Drift);
        assert_eq!(d.mean(), Some(10.0));
        assert_eq!(d.s_min(), Some(1.0));

        let mut d = Minps::new();
        feed(&mut d, &base);
        assert_eq!(d.update(10.0).unwrap(), Outcome::Normal);
    }

    #[test]
    fn minps_constant_window_uses_floor() {
        let mut d = Minps::new();
        feed(&mut d, &[50.0; DD_WINDOW]);
        assert_eq!(d.update(50.0).unwrap(), Outcome::Normal);
        assert_eq!(d.s_min(), Some(SMIN_FLOOR));
        assert_eq!(d.update(51.0).unwrap(), Outcome::Drift);
    }

    #[test]
    fn mysd_stable_deviation_is_normal() {
        // alternating +-2 keeps the window std at 2 once full
        let xs: Vec<f64> = (0..200)
            .map(|i| if i % 2 == 0 { 98.0 } else { 102.0 })
            .collect();
        let mut d = MySd::new();
        assert!(feed(&mut d, &xs).iter().all(|o| *o == Outcome::Normal));
        assert_eq!(d.s_min(), Some(2.0));
    }

    #[test]
    fn mysd_jump_after_calm_prefix() {
        let xs: Vec<f64> = (0..40)
            .map(|i| if i % 2 == 0 { 99.5 } else { 100.5 })
            .collect();
        let mut d = MySd::new();
        assert!(feed(&mut d, &xs).iter().all(|o| *o == Outcome::Normal));
        assert_eq!(d.s_min(), Some(0.5));
        // one outlier of +8: the window std becomes ~1.8 > 1.5
        let mut w = DriftWindow::default();
        for i in 21..40 {
            w.push(if i % 2 == 0 { 99.5 } else { 100.5 });
        }
        w.push(108.0);
        assert!(w.std() > 1.5 && w.std() < 2.0, "{}", w.std());
        assert_eq!(d.update(108.0).unwrap(), Outcome::Drift);
    }

    #[test]
    fn mysd_constant_stream() {
        let mut d = MySd::new();
        assert!(feed(&mut d, &[7.0; 500])
            .iter()
            .all(|o| *o == Outcome::Normal));
    }

    #[test]
    fn reset_restarts_warmup() {
        let mut d = Minps::new();
        feed(&mut d, &[50.0; DD_WINDOW]);
        assert_eq!(d.update(80.0).unwrap(), Outcome::Drift);
        d.reset();
        assert_eq!(d.s_min(), None);
        assert!(feed(
            &mut d,
            &[
                1.0, 90.0, 3.0, 400.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0,
                16.0, 17.0, 18.0, 19.0
            ]
        )
        .iter()
        .all(|o| *o == Outcome::Normal));
    }

    fn walk(seed: u64, len: usize) -> Vec<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut p = 100.0;
        (0..len)
            .map(|_| {
                p *= 1.0 + rng.random_range(-0.03..0.035);
                p
            })
            .collect()
    }

    proptest! {
        #[test]
        fn s_min_never_increases(seed in any::<u64>()) {
            let xs = walk(seed, 300);
            let mut minps = Minps::new();
            let mut mysd = MySd::new();
            let (mut last_a, mut last_b) = (f64::INFINITY, f64::INFINITY);
            for x in xs {
                minps.update(x).unwrap();
                mysd.update(x).unwrap();
                let a = minps.s_min().unwrap_or(f64::INFINITY);
                let b = mysd.s_min().unwrap_or(f64::INFINITY);
                prop_assert!(a <= last_a && a >= SMIN_FLOOR);
                prop_assert!(b <= last_b && b >= SMIN_FLOOR);
                last_a = a;
                last_b = b;
            }
        }

        #[test]
        fn tandd_is_scale_free(seed in any::<u64>(), exp in -8i32..8) {
            let xs = walk(seed, 400);
            let scale = 2f64.powi(exp);
            let mut a = TanDd::new();
            let mut b = TanDd::new();
            let oa = feed(&mut a, &xs);
            let scaled: Vec<f64> = xs.iter().map(|x| x * scale).collect();
            let ob = feed(&mut b, &scaled);
            prop_assert_eq!(oa, ob);
        }
    }
}

//! Prediction error measures and the average-error band of a price series.

use std::ops::RangeInclusive;

use crate::data::TimeSeries;
use crate::error::{Error, Result};

/// Window of the recent-error measure fed to detectors.
pub const LAST_K: usize = 60;

/// Mean of `|predicted - actual| / actual`.
pub fn mape<I>(pairs: I) -> Result<f64>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut n = 0usize;
    let mut sum = 0.0;
    for (predicted, actual) in pairs {
        if actual == 0.0 {
            return Err(Error::Mape("zero actual value"));
        }
        sum += ((predicted - actual) / actual).abs();
        n += 1;
    }
    if n == 0 {
        return Err(Error::Mape("empty sequence"));
    }
    Ok(sum / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub t: usize,
    pub predicted: f64,
    pub actual: f64,
}

/// Every prediction of a run, plus the start of the segment produced by
/// the current model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredictionLog {
    global: Vec<Prediction>,
    segment_start: usize,
    segment_starts: Vec<usize>,
}

impl PredictionLog {
    pub fn new() -> Self {
        Self {
            global: Vec::new(),
            segment_start: 0,
            segment_starts: vec![0],
        }
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            global: Vec::with_capacity(n),
            ..Self::new()
        }
    }

    pub fn push(&mut self, t: usize, predicted: f64, actual: f64) {
        self.global.push(Prediction {
            t,
            predicted,
            actual,
        });
    }

    /// Starts a new segment; called whenever a model is refitted.
    pub fn start_segment(&mut self) {
        self.segment_start = self.global.len();
        if self.segment_starts.last() != Some(&self.segment_start) {
            self.segment_starts.push(self.segment_start);
        }
    }

    pub fn global(&self) -> &[Prediction] {
        &self.global
    }

    pub fn current_segment(&self) -> &[Prediction] {
        &self.global[self.segment_start..]
    }

    /// Global indices at which segments began.
    pub fn segment_starts(&self) -> &[usize] {
        &self.segment_starts
    }

    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }

    /// Recent-error trace `(t, mape over the last k of the segment)` for
    /// every logged prediction, recomputed after the fact.
    pub fn last_k_trace(&self, k: usize) -> Vec<(usize, f64)> {
        let mut out = Vec::with_capacity(self.global.len());
        let mut starts = self.segment_starts.iter().copied().peekable();
        let mut seg_start = 0;
        for (i, p) in self.global.iter().enumerate() {
            while let Some(&s) = starts.peek() {
                if s <= i {
                    seg_start = s;
                    starts.next();
                } else {
                    break;
                }
            }
            let from = seg_start.max((i + 1).saturating_sub(k));
            let value = mape(
                self.global[from..=i]
                    .iter()
                    .map(|q| (q.predicted, q.actual)),
            )
            .expect("actuals are positive");
            out.push((p.t, value));
        }
        out
    }
}

/// Error over all predictions made up to and including time `t`.
pub fn mape_apd(log: &PredictionLog, t: usize) -> Result<f64> {
    mape(
        log.global()
            .iter()
            .take_while(|p| p.t <= t)
            .map(|p| (p.predicted, p.actual)),
    )
}

/// Error over the last `k` predictions of the current segment, or the
/// whole segment if shorter.
pub fn mape_last_k(log: &PredictionLog, k: usize) -> Result<f64> {
    let seg = log.current_segment();
    let from = seg.len().saturating_sub(k);
    mape(seg[from..].iter().map(|p| (p.predicted, p.actual)))
}

/// Per-step terms of the error band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundStep {
    pub t: usize,
    pub abs_perc: f64,
    pub avg_abs_perc: f64,
    pub sign: f64,
    pub guess_correct: f64,
    pub guess_wrong: f64,
    /// `|guess_correct - d[t]| / d[t]`
    pub lower_term: f64,
    /// `|guess_wrong - d[t]| / d[t]`
    pub upper_term: f64,
}

/// Band on the average prediction error of a learner that only sees past
/// closes.
///
/// The literal pair measures both guesses against the previous close, which
/// makes the two limits coincide. The corrected pair measures them against
/// the realized close.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub range: (usize, usize),
    pub steps: Vec<BoundStep>,
    pub lower_literal: f64,
    pub upper_literal: f64,
    pub lower_corrected: f64,
    pub upper_corrected: f64,
    pub learner_ape: f64,
}

impl BoundsReport {
    pub fn avg_abs_perc_error(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.avg_abs_perc)
    }

    pub fn contains_corrected(&self, ape: f64) -> bool {
        self.lower_corrected <= ape && ape <= self.upper_corrected
    }
}

/// Computes the band over `range` (indices into the series, `start >= 1`).
pub fn error_bounds(
    ts: &TimeSeries,
    learner_ape: f64,
    range: RangeInclusive<usize>,
) -> Result<BoundsReport> {
    let (t0, t1) = (*range.start(), *range.end());
    if t0 < 1 || t1 <= t0 || t1 >= ts.len() {
        return Err(Error::InvalidParameter(format!(
            "bounds range [{t0}, {t1}] invalid for a series of {} points",
            ts.len()
        )));
    }
    let d = ts.closes();
    let mut steps = Vec::with_capacity(t1 - t0 + 1);
    let mut abs_sum = 0.0;
    let (mut lit_lower, mut lit_upper, mut lower, mut upper) = (0.0, 0.0, 0.0, 0.0);
    for t in t0..=t1 {
        let diff = d[t] - d[t - 1];
        let abs_perc = (diff / d[t - 1]).abs();
        abs_sum += abs_perc;
        let avg = abs_sum / (t - t0 + 1) as f64;
        let sign = if diff >= 0.0 { 1.0 } else { -1.0 };
        let guess_correct = d[t - 1] * (1.0 + sign * avg);
        let guess_wrong = d[t - 1] * (1.0 - sign * avg);
        lit_lower += ((guess_correct - d[t - 1]) / d[t - 1]).abs();
        lit_upper += ((guess_wrong - d[t - 1]) / d[t - 1]).abs();
        let lower_term = ((guess_correct - d[t]) / d[t]).abs();
        let upper_term = ((guess_wrong - d[t]) / d[t]).abs();
        lower += lower_term;
        upper += upper_term;
        steps.push(BoundStep {
            t,
            abs_perc,
            avg_abs_perc: avg,
            sign,
            guess_correct,
            guess_wrong,
            lower_term,
            upper_term,
        });
    }
    let n = steps.len() as f64;
    Ok(BoundsReport {
        range: (t0, t1),
        steps,
        lower_literal: lit_lower / n,
        upper_literal: lit_upper / n,
        lower_corrected: lower / n,
        upper_corrected: upper / n,
        learner_ape,
    })
}

/// Mean of `|d[t] - d[t-1]| / d[t-1]` over `range`.
pub fn mean_abs_perc(ts: &TimeSeries, range: RangeInclusive<usize>) -> f64 {
    let d = ts.closes();
    let n = range.clone().count() as f64;
    range
        .map(|t| ((d[t] - d[t - 1]) / d[t - 1]).abs())
        .sum::<f64>()
        / n
}

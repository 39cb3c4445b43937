//! Configuration grids, repeated runs and the tables built from them.

mod methodology;
mod report;

use std::collections::HashSet;
use std::path::Path;

use crate::data::TimeSeries;
use crate::detect::DetectorKind;
use crate::error::{Error, Result};
use crate::harness::{parse_flag, run, Configuration, InputSource, PhaseTimings, RunResult};
use crate::learn::LearnerKind;

pub use methodology::{
    best_configurations, find_equivalent_configurations, BestSet, EquivalenceSet,
};
pub use report::{emit_reports, run_dir_name};

/// Configurations to execute, each `runs` times.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub configurations: Vec<Configuration>,
    pub runs: usize,
    /// Run `r` seeds its learner with `base_seed + r`. Stochastic
    /// detectors use `base_seed` for every run.
    pub base_seed: u64,
}

impl Grid {
    /// Every sliding-window combination of the given sets, plus one
    /// continuous row per learner when `include_continuous` is set.
    pub fn product(
        learners: &[LearnerKind],
        detectors: &[DetectorKind],
        inputs: &[InputSource],
        include_continuous: bool,
        runs: usize,
        base_seed: u64,
    ) -> Self {
        let mut configurations = Vec::new();
        for &l in learners {
            for &d in detectors {
                for &i in inputs {
                    configurations.push(Configuration::sliding(l, d, i));
                }
            }
            if include_continuous {
                configurations.push(Configuration::continuous(l));
            }
        }
        Self {
            configurations,
            runs,
            base_seed,
        }
    }

    /// The full grid: 5 learners, 10 detectors, 2 inputs, with continuous rows.
    pub fn full(runs: usize, base_seed: u64) -> Self {
        Self::product(
            &LearnerKind::ALL,
            &DetectorKind::ALL,
            &InputSource::ALL,
            true,
            runs,
            base_seed,
        )
    }

    pub fn from_file(path: impl AsRef<Path>, runs: usize, base_seed: u64) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self {
            configurations: parse_grid(&text)?,
            runs,
            base_seed,
        })
    }
}

/// Parses a grid file: one label per line, any field may be `ALL`, blank
/// lines and `#` comments ignored. Wildcard expansions keep only valid
/// configurations; duplicates are dropped keeping the first occurrence.
pub fn parse_grid(text: &str) -> Result<Vec<Configuration>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |reason: String| Error::GridSyntax {
            line: line_no,
            reason,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (learner, detector, input, flag) = match tokens[..] {
            [l, d, i, tag, f] if tag == "contLearn" || tag == "cL" => (l, d, i, f),
            [l, d, i, f] => (l, d, i, f),
            _ => {
                return Err(syntax(format!(
                    "expected \"<learner> <detector> <input> contLearn <T|F>\", found {line:?}"
                )))
            }
        };
        let learners =
            expand(learner, &LearnerKind::ALL, |s| s.parse()).map_err(|e| syntax(e.to_string()))?;
        let detectors = expand_optional(detector, &DetectorKind::ALL, |s| s.parse())
            .map_err(|e| syntax(e.to_string()))?;
        let inputs = expand_optional(input, &InputSource::ALL, |s| s.parse())
            .map_err(|e| syntax(e.to_string()))?;
        let flags = expand(flag, &[true, false], parse_flag).map_err(|e| syntax(e.to_string()))?;

        let mut produced = 0;
        let mut first_error = None;
        for &l in &learners {
            for &d in &detectors {
                for &i in &inputs {
                    for &c in &flags {
                        let cfg = Configuration {
                            learner: l,
                            detector: d,
                            input: i,
                            continuous: c,
                            seed: 0,
                            detector_seed: 0,
                        };
                        match cfg.validate() {
                            Ok(()) => {
                                produced += 1;
                                if seen.insert(cfg) {
                                    out.push(cfg);
                                }
                            }
                            Err(e) => {
                                first_error.get_or_insert(e);
                            }
                        }
                    }
                }
            }
        }
        if produced == 0 {
            let reason =
                first_error.map_or_else(|| "no configuration".to_string(), |e| e.to_string());
            return Err(syntax(reason));
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidConfiguration(
            "grid file lists no configuration".into(),
        ));
    }
    Ok(out)
}

fn expand<T: Copy>(token: &str, all: &[T], parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if token == "ALL" {
        Ok(all.to_vec())
    } else {
        parse(token).map(|v| vec![v])
    }
}

fn expand_optional<T: Copy>(
    token: &str,
    all: &[T],
    parse: impl Fn(&str) -> Result<T>,
) -> Result<Vec<Option<T>>> {
    if token == "ALL" {
        Ok(std::iter::once(None)
            .chain(all.iter().copied().map(Some))
            .collect())
    } else if token.eq_ignore_ascii_case("none") {
        Ok(vec![None])
    } else {
        parse(token).map(|v| vec![Some(v)])
    }
}

/// Aggregate of one configuration's runs.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub label: String,
    pub config: Configuration,
    pub runtime_mean: f64,
    pub runtime_std: f64,
    pub drifts_mean: f64,
    pub drifts_std: f64,
    pub mape: f64,
    pub relearn_mean: f64,
    pub concepts_mean: f64,
    pub timings_mean: PhaseTimings,
    /// The first run, kept for per-run reports.
    pub first_run: Option<RunResult>,
    /// Set when a run failed; the numeric columns are then NaN.
    pub error: Option<String>,
}

impl ResultRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// One row per configuration, ascending by MAPE; failed rows last.
#[derive(Debug, Clone, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn from_rows(mut rows: Vec<ResultRow>) -> Self {
        rows.sort_by(|a, b| {
            (!a.is_ok())
                .cmp(&!b.is_ok())
                .then(a.mape.total_cmp(&b.mape))
                .then_with(|| a.label.cmp(&b.label))
        });
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ok_rows(&self) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(|r| r.is_ok())
    }

    pub fn get(&self, label: &str) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Successful rows ascending by mean runtime.
    pub fn by_runtime(&self) -> Vec<&ResultRow> {
        let mut rows: Vec<&ResultRow> = self.ok_rows().collect();
        rows.sort_by(|a, b| {
            a.runtime_mean
                .total_cmp(&b.runtime_mean)
                .then_with(|| a.label.cmp(&b.label))
        });
        rows
    }
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Runs `cfg` `runs` times from `base_seed` and aggregates.
pub fn run_configuration(
    cfg: &Configuration,
    ts: &TimeSeries,
    runs: usize,
    base_seed: u64,
) -> ResultRow {
    let label = cfg.label();
    let mut results = Vec::with_capacity(runs);
    for r in 0..runs as u64 {
        let seeded = cfg
            .with_seed(base_seed.wrapping_add(r))
            .with_detector_seed(base_seed);
        match run(&seeded, ts) {
            Ok(res) => results.push(res),
            Err(e) => return failed_row(cfg, label, format!("run {r}: {e}")),
        }
    }
    if results.is_empty() {
        return failed_row(cfg, label, "no runs requested".into());
    }
    let runtimes: Vec<f64> = results.iter().map(|r| r.timings.total()).collect();
    let drifts: Vec<f64> = results.iter().map(|r| r.n_drifts() as f64).collect();
    let mapes: Vec<f64> = results.iter().map(|r| r.mape_apd_final).collect();
    let relearns: Vec<f64> = results.iter().map(|r| r.relearn_count as f64).collect();
    let concepts: Vec<f64> = results.iter().map(|r| r.n_concepts as f64).collect();
    let n = results.len() as f64;
    let mut timings = PhaseTimings::default();
    for r in &results {
        timings.learn += r.timings.learn / n;
        timings.pred += r.timings.pred / n;
        timings.dd_fill += r.timings.dd_fill / n;
        timings.dd_detect += r.timings.dd_detect / n;
        timings.update += r.timings.update / n;
    }
    let (runtime_mean, runtime_std) = mean_std(&runtimes);
    let (drifts_mean, drifts_std) = mean_std(&drifts);
    ResultRow {
        label,
        config: *cfg,
        runtime_mean,
        runtime_std,
        drifts_mean,
        drifts_std,
        mape: mean_std(&mapes).0,
        relearn_mean: mean_std(&relearns).0,
        concepts_mean: mean_std(&concepts).0,
        timings_mean: timings,
        first_run: results.into_iter().next(),
        error: None,
    }
}

fn failed_row(cfg: &Configuration, label: String, error: String) -> ResultRow {
    ResultRow {
        label,
        config: *cfg,
        runtime_mean: f64::NAN,
        runtime_std: f64::NAN,
        drifts_mean: f64::NAN,
        drifts_std: f64::NAN,
        mape: f64::NAN,
        relearn_mean: f64::NAN,
        concepts_mean: f64::NAN,
        timings_mean: PhaseTimings::default(),
        first_run: None,
        error: Some(error),
    }
}

/// Runs every configuration of the grid, one after the other.
pub fn run_grid(grid: &Grid, ts: &TimeSeries) -> Result<ResultTable> {
    if grid.configurations.is_empty() {
        return Err(Error::InvalidConfiguration("empty grid".into()));
    }
    if grid.runs == 0 {
        return Err(Error::InvalidConfiguration(
            "runs must be at least 1".into(),
        ));
    }
    let rows = grid
        .configurations
        .iter()
        .map(|cfg| run_configuration(cfg, ts, grid.runs, grid.base_seed))
        .collect();
    Ok(ResultTable::from_rows(rows))
}

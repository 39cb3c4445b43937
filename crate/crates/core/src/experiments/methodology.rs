//! Selection of configurations whose error is close to the best one, and of
//! the detector/input pairs that stay close for every learner.

use std::collections::{BTreeSet, HashSet};

use super::ResultTable;
use crate::detect::DetectorKind;
use crate::error::{Error, Result};
use crate::harness::{Configuration, InputSource};
use crate::learn::LearnerKind;

/// Configurations within `k` times the smallest error.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceSet {
    pub ref_error: f64,
    /// Label of the row the reference error came from.
    pub ref_label: String,
    pub k: f64,
    /// Members with their errors, ascending.
    pub members: Vec<(Configuration, f64)>,
}

impl EquivalenceSet {
    /// Builds a set directly from member configurations, for fixtures.
    pub fn from_members(members: impl IntoIterator<Item = Configuration>) -> Self {
        Self {
            ref_error: f64::NAN,
            ref_label: String::new(),
            k: f64::NAN,
            members: members
                .into_iter()
                .map(|c| (unseeded(c), f64::NAN))
                .collect(),
        }
    }

    pub fn contains(&self, cfg: &Configuration) -> bool {
        let key = unseeded(*cfg);
        self.members.iter().any(|(c, _)| *c == key)
    }

    pub fn labels(&self) -> Vec<String> {
        self.members.iter().map(|(c, _)| c.label()).collect()
    }

    pub fn learners(&self) -> BTreeSet<LearnerKind> {
        self.members.iter().map(|(c, _)| c.learner).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn unseeded(c: Configuration) -> Configuration {
    c.with_seed(0).with_detector_seed(0)
}

/// Detector/input pairs present with every learner of an equivalence set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BestSet {
    pub pairs: BTreeSet<(DetectorKind, InputSource)>,
}

impl BestSet {
    pub fn contains(&self, detector: DetectorKind, input: InputSource) -> bool {
        self.pairs.contains(&(detector, input))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Members are the successful rows with `mape <= k * ref_error`, where
/// `ref_error` is the smallest error in the table.
pub fn find_equivalent_configurations(table: &ResultTable, k: f64) -> Result<EquivalenceSet> {
    if k.is_nan() || k <= 1.0 || k.is_infinite() {
        return Err(Error::InvalidParameter(format!(
            "k must be finite and greater than 1, got {k}"
        )));
    }
    if !table.ok_rows().any(|r| r.config.learner == LearnerKind::Yc) {
        return Err(Error::Methodology(
            "the table must include configurations of the YC learner".into(),
        ));
    }
    let best = table
        .ok_rows()
        .min_by(|a, b| a.mape.total_cmp(&b.mape))
        .expect("at least one successful row");
    let ref_error = best.mape;
    let threshold = k * ref_error;
    let mut members: Vec<(Configuration, f64)> = table
        .ok_rows()
        .filter(|r| r.mape <= threshold)
        .map(|r| (unseeded(r.config), r.mape))
        .collect();
    members.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then_with(|| a.0.label().cmp(&b.0.label()))
    });
    Ok(EquivalenceSet {
        ref_error,
        ref_label: best.label.clone(),
        k,
        members,
    })
}

/// A pair qualifies iff `(l, detector, input, F)` is a member for every
/// learner `l` appearing in the set.
pub fn best_configurations(equiv: &EquivalenceSet) -> BestSet {
    let learners = equiv.learners();
    let members: HashSet<Configuration> = equiv.members.iter().map(|(c, _)| *c).collect();
    let candidates: BTreeSet<(DetectorKind, InputSource)> = equiv
        .members
        .iter()
        .filter_map(|(c, _)| Some((c.detector?, c.input?)))
        .collect();
    let pairs = candidates
        .into_iter()
        .filter(|&(d, i)| {
            learners
                .iter()
                .all(|&l| members.contains(&Configuration::sliding(l, d, i)))
        })
        .collect();
    BestSet { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{ResultRow, ResultTable};
    use crate::harness::PhaseTimings;

    fn row(cfg: Configuration, mape: f64) -> ResultRow {
        ResultRow {
            label: cfg.label(),
            config: cfg,
            runtime_mean: 0.0,
            runtime_std: 0.0,
            drifts_mean: 0.0,
            drifts_std: 0.0,
            mape,
            relearn_mean: 0.0,
            concepts_mean: 1.0,
            timings_mean: PhaseTimings::default(),
            first_run: None,
            error: None,
        }
    }

    fn three_rows() -> ResultTable {
        ResultTable::from_rows(vec![
            row(Configuration::continuous(LearnerKind::Yc), 0.010),
            row(
                Configuration::sliding(LearnerKind::Yc, DetectorKind::Adwin, InputSource::Mape),
                0.015,
            ),
            row(Configuration::continuous(LearnerKind::MinValInTs), 0.025),
        ])
    }

    #[test]
    fn threshold_arithmetic() {
        let e = find_equivalent_configurations(&three_rows(), 2.0).unwrap();
        assert_eq!(e.ref_error, 0.010);
        assert_eq!(e.ref_label, "YC none none contLearn T");
        assert_eq!(
            e.labels(),
            vec!["YC none none contLearn T", "YC ADWIN MAPE contLearn F"]
        );
        let tight = find_equivalent_configurations(&three_rows(), 1.0 + 1e-9).unwrap();
        assert_eq!(tight.len(), 1);
    }

    #[test]
    fn rejects_bad_k_and_missing_yc() {
        assert!(find_equivalent_configurations(&three_rows(), 1.0).is_err());
        assert!(find_equivalent_configurations(&three_rows(), f64::NAN).is_err());
        let no_yc =
            ResultTable::from_rows(vec![row(Configuration::continuous(LearnerKind::Mlp), 0.01)]);
        assert!(matches!(
            find_equivalent_configurations(&no_yc, 2.0),
            Err(Error::Methodology(_))
        ));
    }

    #[test]
    fn single_learner_keeps_all_its_pairs() {
        let members: Vec<Configuration> = DetectorKind::ALL
            .iter()
            .flat_map(|&d| InputSource::ALL.map(|i| Configuration::sliding(LearnerKind::Yc, d, i)))
            .collect();
        let best = best_configurations(&EquivalenceSet::from_members(members));
        assert_eq!(best.len(), 20);
    }

    #[test]
    fn pair_missing_for_one_learner_excluded() {
        let e = EquivalenceSet::from_members([
            Configuration::sliding(LearnerKind::Yc, DetectorKind::Adwin, InputSource::Mape),
            Configuration::sliding(
                LearnerKind::LinearRegression,
                DetectorKind::Adwin,
                InputSource::Mape,
            ),
            Configuration::sliding(
                LearnerKind::Yc,
                DetectorKind::PageHinkley,
                InputSource::Data,
            ),
        ]);
        let best = best_configurations(&e);
        assert!(best.contains(DetectorKind::Adwin, InputSource::Mape));
        assert!(!best.contains(DetectorKind::PageHinkley, InputSource::Data));
    }
}

//! Regressors mapping three lagged closes to the next close.

mod linear;
mod mlp;

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;

use crate::data::{Instance, LAGS};
use crate::error::{Error, Result};

pub use linear::{BayesianRidge, LinearModel};
pub use mlp::{Mlp, MlpParams};

/// Nominal training set size.
pub const TRAINING_SET_SIZE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LearnerKind {
    /// Yesterday's close.
    Yc,
    /// Smallest target seen in the training set.
    MinValInTs,
    LinearRegression,
    BayesianRidge,
    Mlp,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 5] = [
        LearnerKind::Yc,
        LearnerKind::MinValInTs,
        LearnerKind::LinearRegression,
        LearnerKind::BayesianRidge,
        LearnerKind::Mlp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            LearnerKind::Yc => "YC",
            LearnerKind::MinValInTs => "MinValInTS",
            LearnerKind::LinearRegression => "LR",
            LearnerKind::BayesianRidge => "BRR",
            LearnerKind::Mlp => "MLPR",
        }
    }

    /// Whether fitting draws from the random generator.
    pub fn is_stochastic(self) -> bool {
        self == LearnerKind::Mlp
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LearnerKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfiguration(format!("unknown learner {s:?}")))
    }
}

/// Contiguous instances a model is fitted on.
#[derive(Debug, Clone, Copy)]
pub struct TrainingSet<'a> {
    instances: &'a [Instance],
}

impl<'a> TrainingSet<'a> {
    pub fn new(instances: &'a [Instance]) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let finite = instances
            .iter()
            .all(|i| i.target.is_finite() && i.features.iter().all(|f| f.is_finite()));
        if !finite {
            return Err(Error::InvalidParameter(
                "non-finite value in training set".into(),
            ));
        }
        Ok(Self { instances })
    }

    pub fn instances(&self) -> &'a [Instance] {
        self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn first_t(&self) -> usize {
        self.instances[0].t
    }
}

/// A fitted regressor.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Yc,
    Constant(f64),
    Linear(LinearModel),
    Mlp(Box<Mlp>),
}

impl Model {
    pub fn predict(&self, features: &[f64; LAGS]) -> f64 {
        match self {
            Model::Yc => features[LAGS - 1],
            Model::Constant(c) => *c,
            Model::Linear(m) => m.predict(features),
            Model::Mlp(m) => m.predict(features),
        }
    }
}

/// Fits `kind` on the training set. Only the MLP consumes `rng`.
pub fn fit(kind: LearnerKind, training: &TrainingSet<'_>, rng: &mut ChaCha8Rng) -> Result<Model> {
    let instances = training.instances();
    Ok(match kind {
        LearnerKind::Yc => Model::Yc,
        LearnerKind::MinValInTs => Model::Constant(
            instances
                .iter()
                .map(|i| i.target)
                .fold(f64::INFINITY, f64::min),
        ),
        LearnerKind::LinearRegression => Model::Linear(LinearModel::fit_ols(instances)),
        LearnerKind::BayesianRidge => Model::Linear(BayesianRidge::default().fit(instances)),
        LearnerKind::Mlp => Model::Mlp(Box::new(Mlp::fit(instances, &MlpParams::default(), rng))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn instances(targets: &[f64]) -> Vec<Instance> {
        targets
            .iter()
            .enumerate()
            .map(|(i, &y)| Instance {
                features: [y + 1.0, y + 2.0, y + 3.0],
                target: y,
                t: i + 3,
            })
            .collect()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    #[test]
    fn yc_returns_last_lag() {
        let data = instances(&[5.0, 6.0]);
        let m = fit(
            LearnerKind::Yc,
            &TrainingSet::new(&data).unwrap(),
            &mut rng(),
        )
        .unwrap();
        assert_eq!(m.predict(&[10.0, 11.0, 12.0]), 12.0);
        let other = instances(&[500.0, 1.0, 7.0]);
        let m2 = fit(
            LearnerKind::Yc,
            &TrainingSet::new(&other).unwrap(),
            &mut rng(),
        )
        .unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn min_val_is_constant() {
        let data = instances(&[5.0, 3.0, 9.0, 4.0]);
        let m = fit(
            LearnerKind::MinValInTs,
            &TrainingSet::new(&data).unwrap(),
            &mut rng(),
        )
        .unwrap();
        assert_eq!(m, Model::Constant(3.0));
        assert_eq!(m.predict(&[1.0, 2.0, 3.0]), 3.0);
        assert_eq!(m.predict(&[100.0, 200.0, 300.0]), 3.0);
    }

    #[test]
    fn empty_and_non_finite_rejected() {
        assert!(matches!(
            TrainingSet::new(&[]),
            Err(Error::EmptyTrainingSet)
        ));
        let mut data = instances(&[1.0, 2.0]);
        data[1].features[0] = f64::NAN;
        assert!(TrainingSet::new(&data).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for k in LearnerKind::ALL {
            assert_eq!(k.label().parse::<LearnerKind>().unwrap(), k);
        }
    }
}

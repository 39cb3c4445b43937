//! One-hidden-layer perceptron regressor trained full-batch with Adam on
//! standardized inputs and targets.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::{Instance, LAGS};

#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    pub hidden: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// L2 penalty on the weights.
    pub l2: f64,
    pub beta_1: f64,
    pub beta_2: f64,
    pub epsilon: f64,
}

impl Default for MlpParams {
    fn default() -> Self {
        Self {
            hidden: 100,
            epochs: 200,
            learning_rate: 1e-3,
            l2: 1e-4,
            beta_1: 0.9,
            beta_2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Scaler {
    mean: f64,
    scale: f64,
}

impl Scaler {
    fn fit(values: impl Iterator<Item = f64> + Clone) -> Self {
        let n = values.clone().count() as f64;
        let mean = values.clone().sum::<f64>() / n;
        let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        Self {
            mean,
            scale: if std > 0.0 { std } else { 1.0 },
        }
    }

    fn apply(&self, v: f64) -> f64 {
        (v - self.mean) / self.scale
    }

    fn invert(&self, v: f64) -> f64 {
        v * self.scale + self.mean
    }
}

/// Flat parameter vector: hidden weights (`hidden * LAGS`, row major),
/// hidden biases, output weights, output bias.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    hidden: usize,
    params: Vec<f64>,
    inputs: [Scaler; LAGS],
    output: Scaler,
}

struct Layout {
    hidden: usize,
}

impl Layout {
    fn w1(&self) -> std::ops::Range<usize> {
        0..self.hidden * LAGS
    }
    fn b1(&self) -> std::ops::Range<usize> {
        let s = self.hidden * LAGS;
        s..s + self.hidden
    }
    fn w2(&self) -> std::ops::Range<usize> {
        let s = self.hidden * (LAGS + 1);
        s..s + self.hidden
    }
    fn b2(&self) -> usize {
        self.hidden * (LAGS + 2)
    }
    fn len(&self) -> usize {
        self.b2() + 1
    }
}

impl Mlp {
    pub fn fit(instances: &[Instance], p: &MlpParams, rng: &mut ChaCha8Rng) -> Self {
        let inputs: [Scaler; LAGS] =
            std::array::from_fn(|k| Scaler::fit(instances.iter().map(move |i| i.features[k])));
        let output = Scaler::fit(instances.iter().map(|i| i.target));
        let xs: Vec<[f64; LAGS]> = instances
            .iter()
            .map(|i| std::array::from_fn(|k| inputs[k].apply(i.features[k])))
            .collect();
        let ys: Vec<f64> = instances.iter().map(|i| output.apply(i.target)).collect();

        let layout = Layout { hidden: p.hidden };
        let mut params = vec![0.0; layout.len()];
        // Glorot-uniform initialization, ReLU gain
        let bound1 = (6.0 / (LAGS + p.hidden) as f64).sqrt();
        let bound2 = (6.0 / (p.hidden + 1) as f64).sqrt();
        for i in layout.w1().chain(layout.b1()) {
            params[i] = rng.random_range(-bound1..bound1);
        }
        for i in layout.w2() {
            params[i] = rng.random_range(-bound2..bound2);
        }
        params[layout.b2()] = rng.random_range(-bound2..bound2);

        let mut grad = vec![0.0; params.len()];
        let mut m = vec![0.0; params.len()];
        let mut v = vec![0.0; params.len()];
        let mut hidden = vec![0.0; p.hidden];
        let n = xs.len() as f64;
        for epoch in 1..=p.epochs {
            grad.iter_mut().for_each(|g| *g = 0.0);
            for (x, &y) in xs.iter().zip(&ys) {
                let mut out = params[layout.b2()];
                for h in 0..p.hidden {
                    let w = &params[h * LAGS..(h + 1) * LAGS];
                    let a = params[layout.b1().start + h] + w[0] * x[0] + w[1] * x[1] + w[2] * x[2];
                    hidden[h] = a.max(0.0);
                    out += params[layout.w2().start + h] * hidden[h];
                }
                // d(0.5 * mean squared error) / d(out)
                let delta = (out - y) / n;
                grad[layout.b2()] += delta;
                for h in 0..p.hidden {
                    if hidden[h] <= 0.0 {
                        continue;
                    }
                    let w2 = params[layout.w2().start + h];
                    grad[layout.w2().start + h] += delta * hidden[h];
                    let dh = delta * w2;
                    grad[layout.b1().start + h] += dh;
                    for k in 0..LAGS {
                        grad[h * LAGS + k] += dh * x[k];
                    }
                }
            }
            for i in layout.w1().chain(layout.w2()) {
                grad[i] += p.l2 * params[i] / n;
            }

            let t = epoch as i32;
            let lr = p.learning_rate * (1.0 - p.beta_2.powi(t)).sqrt() / (1.0 - p.beta_1.powi(t));
            for i in 0..params.len() {
                m[i] = p.beta_1 * m[i] + (1.0 - p.beta_1) * grad[i];
                v[i] = p.beta_2 * v[i] + (1.0 - p.beta_2) * grad[i] * grad[i];
                params[i] -= lr * m[i] / (v[i].sqrt() + p.epsilon);
            }
        }
        Self {
            hidden: p.hidden,
            params,
            inputs,
            output,
        }
    }

    pub fn predict(&self, features: &[f64; LAGS]) -> f64 {
        let layout = Layout {
            hidden: self.hidden,
        };
        let x: [f64; LAGS] = std::array::from_fn(|k| self.inputs[k].apply(features[k]));
        let mut out = self.params[layout.b2()];
        for h in 0..self.hidden {
            let w = &self.params[h * LAGS..(h + 1) * LAGS];
            let a = self.params[layout.b1().start + h] + w[0] * x[0] + w[1] * x[1] + w[2] * x[2];
            out += self.params[layout.w2().start + h] * a.max(0.0);
        }
        self.output.invert(out)
    }
}

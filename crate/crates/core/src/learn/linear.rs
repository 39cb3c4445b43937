use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::data::{Instance, LAGS};

const SINGULAR_JITTER: f64 = 1e-10;

/// Affine map `intercept + coef . features`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub coef: [f64; LAGS],
    pub intercept: f64,
}

impl LinearModel {
    pub fn predict(&self, features: &[f64; LAGS]) -> f64 {
        self.intercept
            + self
                .coef
                .iter()
                .zip(features)
                .map(|(c, f)| c * f)
                .sum::<f64>()
    }

    /// Ordinary least squares through the normal equations on centered
    /// data. A singular Gram matrix gets a tiny ridge.
    pub fn fit_ols(instances: &[Instance]) -> Self {
        let c = Centered::new(instances);
        let gram = c.gram();
        let xty = c.xty();
        let coef = gram
            .cholesky()
            .map(|ch| ch.solve(&xty))
            .or_else(|| {
                (gram + Matrix3::identity() * SINGULAR_JITTER)
                    .cholesky()
                    .map(|ch| ch.solve(&xty))
            })
            .unwrap_or_else(|| {
                gram.pseudo_inverse(1e-12)
                    .map(|p| p * xty)
                    .unwrap_or_else(|_| Vector3::zeros())
            });
        c.model(coef)
    }
}

/// Features and targets centered on their means.
struct Centered {
    x: Vec<Vector3<f64>>,
    y: Vec<f64>,
    x_mean: Vector3<f64>,
    y_mean: f64,
}

impl Centered {
    fn new(instances: &[Instance]) -> Self {
        let n = instances.len() as f64;
        let x_mean = instances
            .iter()
            .fold(Vector3::zeros(), |acc, i| acc + Vector3::from(i.features))
            / n;
        let y_mean = instances.iter().map(|i| i.target).sum::<f64>() / n;
        Self {
            x: instances
                .iter()
                .map(|i| Vector3::from(i.features) - x_mean)
                .collect(),
            y: instances.iter().map(|i| i.target - y_mean).collect(),
            x_mean,
            y_mean,
        }
    }

    fn gram(&self) -> Matrix3<f64> {
        self.x
            .iter()
            .fold(Matrix3::zeros(), |acc, r| acc + r * r.transpose())
    }

    fn xty(&self) -> Vector3<f64> {
        self.x
            .iter()
            .zip(&self.y)
            .fold(Vector3::zeros(), |acc, (r, y)| acc + r * *y)
    }

    fn sse(&self, coef: &Vector3<f64>) -> f64 {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(r, y)| {
                let e = y - r.dot(coef);
                e * e
            })
            .sum()
    }

    fn model(&self, coef: Vector3<f64>) -> LinearModel {
        LinearModel {
            coef: [coef[0], coef[1], coef[2]],
            intercept: self.y_mean - coef.dot(&self.x_mean),
        }
    }
}

/// Bayesian ridge regression with Gamma hyper-priors on the noise
/// precision `alpha` and the weight precision `lambda`, both re-estimated
/// by evidence maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianRidge {
    pub max_iter: usize,
    pub tol: f64,
    pub alpha_1: f64,
    pub alpha_2: f64,
    pub lambda_1: f64,
    pub lambda_2: f64,
}

impl Default for BayesianRidge {
    fn default() -> Self {
        Self {
            max_iter: 300,
            tol: 1e-3,
            alpha_1: 1e-6,
            alpha_2: 1e-6,
            lambda_1: 1e-6,
            lambda_2: 1e-6,
        }
    }
}

impl BayesianRidge {
    pub fn fit(&self, instances: &[Instance]) -> LinearModel {
        self.fit_with_precisions(instances).0
    }

    /// Fits and also returns the final `(alpha, lambda)`.
    pub fn fit_with_precisions(&self, instances: &[Instance]) -> (LinearModel, f64, f64) {
        let c = Centered::new(instances);
        let n = instances.len() as f64;
        let gram = c.gram();
        let xty = c.xty();
        let eig = SymmetricEigen::new(gram);
        let eigvals = eig.eigenvalues.map(|e| e.max(0.0));
        let vecs = eig.eigenvectors;
        let proj = vecs.transpose() * xty;

        let solve = |alpha: f64, lambda: f64| -> Vector3<f64> {
            let ratio = lambda / alpha;
            let scaled = Vector3::from_fn(|i, _| proj[i] / (eigvals[i] + ratio));
            vecs * scaled
        };

        let var_y = c.y.iter().map(|y| y * y).sum::<f64>() / n;
        let mut alpha = 1.0 / (var_y + f64::EPSILON);
        let mut lambda = 1.0;
        let mut coef_old: Option<Vector3<f64>> = None;
        for _ in 0..self.max_iter {
            let coef = solve(alpha, lambda);
            let sse = c.sse(&coef);
            let gamma: f64 = eigvals
                .iter()
                .map(|e| alpha * e / (lambda + alpha * e))
                .sum();
            lambda = (gamma + 2.0 * self.lambda_1) / (coef.norm_squared() + 2.0 * self.lambda_2);
            alpha = (n - gamma + 2.0 * self.alpha_1) / (sse + 2.0 * self.alpha_2);
            if coef_old.is_some_and(|old| (old - coef).abs().sum() < self.tol) {
                break;
            }
            coef_old = Some(coef);
        }
        (c.model(solve(alpha, lambda)), alpha, lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_instances(seed: u64, n: usize, f: impl Fn(&[f64; 3]) -> f64) -> Vec<Instance> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|t| {
                let features = [
                    rng.random_range(50.0..150.0),
                    rng.random_range(50.0..150.0),
                    rng.random_range(50.0..150.0),
                ];
                Instance {
                    target: f(&features),
                    features,
                    t: t + 3,
                }
            })
            .collect()
    }

    #[test]
    fn ols_recovers_last_lag_doubling() {
        let data = random_instances(1, 30, |f| 2.0 * f[2]);
        let m = LinearModel::fit_ols(&data);
        assert!(m.coef[0].abs() < 1e-8, "{:?}", m);
        assert!(m.coef[1].abs() < 1e-8, "{:?}", m);
        assert!((m.coef[2] - 2.0).abs() < 1e-8, "{:?}", m);
        assert!(m.intercept.abs() < 1e-8, "{:?}", m);

        let exact = LinearModel {
            coef: [0.0, 0.0, 2.0],
            intercept: 0.0,
        };
        assert_eq!(exact.predict(&[1.0, 5.0, 7.0]), 14.0);
    }

    #[test]
    fn ols_matches_hand_solved_system() {
        // y = 3 + 0.5 a - 1.25 b + 2 c
        let data = random_instances(2, 40, |f| 3.0 + 0.5 * f[0] - 1.25 * f[1] + 2.0 * f[2]);
        let m = LinearModel::fit_ols(&data);
        for (got, want) in m.coef.iter().zip([0.5, -1.25, 2.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!((m.intercept - 3.0).abs() < 1e-7);
    }

    #[test]
    fn ols_singular_gram_falls_back_to_mean() {
        let data: Vec<Instance> = (0..30)
            .map(|t| Instance {
                features: [100.0; 3],
                target: 100.0 + (t % 3) as f64,
                t: t + 3,
            })
            .collect();
        let m = LinearModel::fit_ols(&data);
        assert!(m.predict(&[100.0; 3]).is_finite());
        assert!((m.predict(&[100.0; 3]) - 101.0).abs() < 1e-6);
    }

    #[test]
    fn bayesian_ridge_approaches_ols_on_noiseless_data() {
        let data = random_instances(3, 30, |f| 1.0 + 0.3 * f[0] + 0.2 * f[1] + 0.5 * f[2]);
        let ols = LinearModel::fit_ols(&data);
        let brr = BayesianRidge::default().fit(&data);
        for (a, b) in ols.coef.iter().zip(&brr.coef) {
            assert!((a - b).abs() <= 1e-4 * a.abs(), "ols {a} brr {b}");
        }
    }

    #[test]
    fn bayesian_ridge_shrinks_noisy_fit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let data = random_instances(4, 30, |f| f[2] + 0.0 * f[0]);
        let noisy: Vec<Instance> = data
            .into_iter()
            .map(|mut i| {
                i.target += rng.random_range(-20.0..20.0);
                i
            })
            .collect();
        let (m, alpha, lambda) = BayesianRidge::default().fit_with_precisions(&noisy);
        assert!(alpha > 0.0 && lambda > 0.0);
        let ols = LinearModel::fit_ols(&noisy);
        let norm = |c: &[f64; 3]| c.iter().map(|v| v * v).sum::<f64>();
        assert!(norm(&m.coef) <= norm(&ols.coef) + 1e-12);
    }
}

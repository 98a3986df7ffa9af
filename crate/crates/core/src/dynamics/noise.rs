use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Zero-mean additive payoff noise.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NoiseModel {
    #[default]
    None,
    /// Uniform on `[-bound, bound]`.
    Uniform { bound: f64 },
    Gaussian { sigma: f64 },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::None => Ok(()),
            NoiseModel::Uniform { bound } if bound.is_finite() && bound >= 0.0 => Ok(()),
            NoiseModel::Gaussian { sigma } if sigma.is_finite() && sigma >= 0.0 => Ok(()),
            other => Err(Error::InvalidNoise(format!("{other:?}"))),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, NoiseModel::None)
    }

    /// Variance bound `σ²`.
    pub fn variance(&self) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::Uniform { bound } => bound * bound / 3.0,
            NoiseModel::Gaussian { sigma } => sigma * sigma,
        }
    }

    /// One draw. `None` consumes no randomness.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::Uniform { bound } => bound * (2.0 * rng.random::<f64>() - 1.0),
            NoiseModel::Gaussian { sigma } => {
                Normal::new(0.0, sigma).expect("validated sigma").sample(rng)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for model in [NoiseModel::Uniform { bound: 0.1 }, NoiseModel::Gaussian { sigma: 0.5 }] {
            let n = 200_000;
            let draws: Vec<f64> = (0..n).map(|_| model.sample(&mut rng)).collect();
            let mean = draws.iter().sum::<f64>() / n as f64;
            let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
            let se = (model.variance() / n as f64).sqrt();
            assert!(mean.abs() < 5.0 * se, "{model:?} mean {mean}");
            assert!((var / model.variance() - 1.0).abs() < 0.02, "{model:?} var {var}");
        }
        let u = NoiseModel::Uniform { bound: 0.1 };
        assert!((0..10_000).all(|_| u.sample(&mut rng).abs() <= 0.1));
    }

    #[test]
    fn uniform_variance() {
        assert!((NoiseModel::Uniform { bound: 0.3 }.variance() - 0.03).abs() < 1e-15);
        assert_eq!(NoiseModel::None.variance(), 0.0);
    }

    #[test]
    fn serde_and_validation() {
        let m: NoiseModel = serde_json::from_str(r#"{"kind": "uniform", "bound": 0.1}"#).unwrap();
        assert_eq!(m, NoiseModel::Uniform { bound: 0.1 });
        assert!(NoiseModel::Gaussian { sigma: -1.0 }.validate().is_err());
        assert!(serde_json::from_str::<NoiseModel>(r#"{"kind": "cauchy"}"#).is_err());
    }

    #[test]
    fn none_consumes_no_randomness() {
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        NoiseModel::None.sample(&mut a);
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }
}

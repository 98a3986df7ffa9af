//! Payoff observation channels and the importance-weighted estimator.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::noise::NoiseModel;
use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, PureProfile};
use crate::quantize::QuantizationScheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeedbackMode {
    /// Players observe their exact mixed payoff vectors.
    ExactVector,
    /// Players observe `Q(v_i(x) + ξ)` componentwise.
    QuantizedVector,
    /// Players observe only the quantized, noisy payoff of the realized
    /// profile and rebuild a payoff vector by importance weighting.
    BanditIwe,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackChannel {
    pub mode: FeedbackMode,
    pub quantizer: QuantizationScheme,
    pub noise: NoiseModel,
}

impl FeedbackChannel {
    pub fn new(mode: FeedbackMode, quantizer: QuantizationScheme, noise: NoiseModel) -> Result<Self> {
        noise.validate()?;
        if mode == FeedbackMode::ExactVector && (!quantizer.is_identity() || !noise.is_none()) {
            return Err(Error::InvalidChannel(
                "exact-vector feedback requires the identity quantizer and no noise".into(),
            ));
        }
        Ok(Self { mode, quantizer, noise })
    }

    pub fn exact() -> Self {
        Self { mode: FeedbackMode::ExactVector, quantizer: QuantizationScheme::identity(), noise: NoiseModel::None }
    }

    pub fn quantized_vector(quantizer: QuantizationScheme) -> Self {
        Self { mode: FeedbackMode::QuantizedVector, quantizer, noise: NoiseModel::None }
    }

    pub fn bandit(quantizer: QuantizationScheme, noise: NoiseModel) -> Result<Self> {
        Self::new(FeedbackMode::BanditIwe, quantizer, noise)
    }
}

/// Mixes a strategy with the uniform distribution: `(1-ε)x + ε/|A|`.
pub fn sampling_strategy(x: &[f64], epsilon: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidExploration(epsilon));
    }
    let mut out = vec![0.0; x.len()];
    sampling_strategy_into(x, epsilon, &mut out);
    Ok(out)
}

pub(crate) fn sampling_strategy_into(x: &[f64], epsilon: f64, out: &mut [f64]) {
    let floor = epsilon / x.len() as f64;
    for (o, &p) in out.iter_mut().zip(x) {
        *o = (1.0 - epsilon) * p + floor;
    }
}

/// Draws an action index from a probability vector by inversion.
pub fn sample_action<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (a, &p) in probabilities.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            return a;
        }
    }
    // Rounding left the total just below u; fall back to the last action
    // with positive mass.
    probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(probabilities.len() - 1)
}

/// Quantized noisy payoffs `Q(u_i(a) + ξ_i)` of every player at the realized
/// profile. Noise is drawn in player order.
pub fn realized_feedback<R: Rng + ?Sized>(
    game: &Game,
    profile: &PureProfile,
    channel: &FeedbackChannel,
    rng: &mut R,
) -> Result<Vec<f64>> {
    game.check_pure(profile)?;
    game.pure_payoffs_unchecked(profile.actions())
        .map(|u| channel.quantizer.quantize(u + channel.noise.sample(rng)))
        .collect()
}

/// Importance-weighted payoff vector: `û / x̂_a` at the chosen action,
/// zero elsewhere.
pub fn iwe_estimate(chosen: usize, payoff: f64, sampling: &[f64]) -> Result<Vec<f64>> {
    if chosen >= sampling.len() {
        return Err(Error::DimensionMismatch(format!(
            "chosen action {chosen} out of range 0..{}",
            sampling.len()
        )));
    }
    let p = sampling[chosen];
    if !(p > 0.0) {
        return Err(Error::ZeroSamplingProbability(chosen));
    }
    let mut v = vec![0.0; sampling.len()];
    v[chosen] = payoff / p;
    Ok(v)
}

/// Full payoff-vector feedback: exact `v_i(x)`, or `Q(v_i(x) + ξ)` with
/// independent noise per coordinate (players in order, actions within).
pub fn vector_feedback<R: Rng + ?Sized>(
    game: &Game,
    x: &MixedProfile,
    channel: &FeedbackChannel,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let exact = game.payoff_vectors(x)?;
    match channel.mode {
        FeedbackMode::ExactVector => Ok(exact),
        FeedbackMode::QuantizedVector => exact
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|c| channel.quantizer.quantize(c + channel.noise.sample(rng)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect(),
        FeedbackMode::BanditIwe => Err(Error::InvalidChannel("vector feedback requested on a bandit channel".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::library::{coordination, near_tie, small_payoffs};
    use crate::quantize::Rule;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampling_strategy_examples() {
        assert_eq!(sampling_strategy(&[1.0, 0.0], 0.5).unwrap(), vec![0.75, 0.25]);
        assert_eq!(sampling_strategy(&[0.3, 0.7], 0.0).unwrap(), vec![0.3, 0.7]);
        let x = sampling_strategy(&[0.6, 0.4], 0.1).unwrap();
        assert!((x[0] - 0.59).abs() < 1e-15 && (x[1] - 0.41).abs() < 1e-15);
        assert!(matches!(sampling_strategy(&[1.0], 1.5), Err(Error::InvalidExploration(_))));
        assert!(sampling_strategy(&[1.0], -0.1).is_err());
    }

    #[test]
    fn realized_feedback_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let g = coordination();
        let a = PureProfile::new(vec![0, 0]);
        let exact = FeedbackChannel::bandit(QuantizationScheme::identity(), NoiseModel::None).unwrap();
        assert_eq!(realized_feedback(&g, &a, &exact, &mut rng).unwrap(), vec![5.1, 5.1]);

        let q4 = FeedbackChannel::bandit(QuantizationScheme::new(Rule::HalfAway, 4.0).unwrap(), NoiseModel::None).unwrap();
        assert_eq!(realized_feedback(&g, &a, &q4, &mut rng).unwrap(), vec![4.0, 4.0]);

        let q1 = FeedbackChannel::bandit(QuantizationScheme::half_away(1.0).unwrap(), NoiseModel::None).unwrap();
        let out = realized_feedback(&small_payoffs(), &PureProfile::new(vec![0, 1]), &q1, &mut rng).unwrap();
        assert_eq!(out, vec![1.0, 1.0]);
    }

    #[test]
    fn iwe_examples() {
        assert_eq!(iwe_estimate(0, 1.0, &[0.5, 0.5]).unwrap(), vec![2.0, 0.0]);
        assert_eq!(iwe_estimate(1, 0.0, &[0.5, 0.5]).unwrap(), vec![0.0, 0.0]);
        let v = iwe_estimate(0, 99.0, &[0.55, 0.45]).unwrap();
        assert!((v[0] - 180.0).abs() < 1e-12 && v[1] == 0.0);
        assert!(matches!(iwe_estimate(1, 1.0, &[1.0, 0.0]), Err(Error::ZeroSamplingProbability(1))));
    }

    #[test]
    fn vector_feedback_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let g = near_tie();
        let x = MixedProfile::new(vec![vec![0.8, 0.2], vec![0.2, 0.8]]).unwrap();
        let ch = FeedbackChannel::quantized_vector(QuantizationScheme::half_away(1.0).unwrap());
        let v = vector_feedback(&g, &x, &ch, &mut rng).unwrap();
        assert_eq!(v[0], vec![101.0, 99.0]);
        assert_eq!(v[1], vec![99.0, 101.0]);

        let ch = FeedbackChannel::quantized_vector(QuantizationScheme::even_away(1.0).unwrap());
        let x = MixedProfile::new(vec![vec![0.37, 0.63], vec![0.9, 0.1]]).unwrap();
        assert_eq!(vector_feedback(&g, &x, &ch, &mut rng).unwrap()[0], vec![100.0, 100.0]);

        let v = vector_feedback(&g, &x, &FeedbackChannel::exact(), &mut rng).unwrap();
        assert_eq!(v, g.payoff_vectors(&x).unwrap());

        let bandit = FeedbackChannel::bandit(QuantizationScheme::identity(), NoiseModel::None).unwrap();
        assert!(vector_feedback(&g, &x, &bandit, &mut rng).is_err());
    }

    #[test]
    fn exact_channel_rejects_quantizer_and_noise() {
        let q = QuantizationScheme::half_away(1.0).unwrap();
        assert!(FeedbackChannel::new(FeedbackMode::ExactVector, q, NoiseModel::None).is_err());
        assert!(FeedbackChannel::new(
            FeedbackMode::ExactVector,
            QuantizationScheme::identity(),
            NoiseModel::Uniform { bound: 0.1 }
        )
        .is_err());
    }

    #[test]
    fn sampler_follows_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = [0.2, 0.0, 0.5, 0.3];
        let mut counts = [0usize; 4];
        let n = 100_000;
        for _ in 0..n {
            counts[sample_action(&p, &mut rng)] += 1;
        }
        assert_eq!(counts[1], 0);
        for (c, q) in counts.iter().zip(p) {
            assert!((*c as f64 / n as f64 - q).abs() < 0.01);
        }
    }
}

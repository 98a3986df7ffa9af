//! The follow-the-quantized-leader update loop.

use rand::Rng;

use super::feedback::{
    iwe_estimate, realized_feedback, sample_action, sampling_strategy_into, vector_feedback, FeedbackChannel,
    FeedbackMode,
};
use super::schedule::Schedule;
use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, PureProfile};
use crate::regularizer::Regularizer;

/// Scores and strategies of all players at stage `n`.
///
/// Scores are only meaningful up to adding a constant to each player's
/// vector (the choice maps ignore such shifts). Updates are applied in the
/// gauge where each increment's largest coordinate is zero, so feedback that
/// is constant across a player's actions leaves the scores bit-for-bit
/// unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    stage: u64,
    scores: Vec<Vec<f64>>,
    strategies: MixedProfile,
    sampling: Option<MixedProfile>,
}

impl LearnerState {
    /// Starts at stage 1 from explicit score vectors.
    pub fn from_scores(regularizer: &Regularizer, scores: Vec<Vec<f64>>) -> Result<Self> {
        let strategies = scores
            .iter()
            .map(|y| regularizer.choice_map(y))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { stage: 1, scores, strategies: MixedProfile(strategies), sampling: None })
    }

    /// Starts at stage 1 from a prescribed mixed profile.
    pub fn from_strategies(regularizer: &Regularizer, x: &MixedProfile) -> Result<Self> {
        let scores = x
            .strategies()
            .iter()
            .map(|xi| regularizer.initial_scores_for(xi))
            .collect::<Result<Vec<_>>>()?;
        Self::from_scores(regularizer, scores)
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn scores(&self) -> &[Vec<f64>] {
        &self.scores
    }

    pub fn strategies(&self) -> &MixedProfile {
        &self.strategies
    }

    /// Sampling strategies of the last bandit stage, if any.
    pub fn sampling(&self) -> Option<&MixedProfile> {
        self.sampling.as_ref()
    }
}

/// What happened during one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageObservation {
    pub stage: u64,
    pub step_size: f64,
    /// Sampling strategies `x̂_n` (bandit mode).
    pub sampling: Option<Vec<Vec<f64>>>,
    /// Realized pure profile (bandit mode).
    pub actions: Option<Vec<usize>>,
    /// Realized quantized payoffs `û_{i,n}` (bandit mode).
    pub payoffs: Option<Vec<f64>>,
    /// Payoff-vector estimates `V_{i,n}` fed into the score update.
    pub estimates: Vec<Vec<f64>>,
}

/// One configured instance of the dynamics.
#[derive(Debug, Clone)]
pub struct Ftql<'a> {
    pub game: &'a Game,
    pub regularizer: &'a Regularizer,
    pub schedule: Schedule,
    pub channel: FeedbackChannel,
}

impl<'a> Ftql<'a> {
    pub fn new(game: &'a Game, regularizer: &'a Regularizer, schedule: Schedule, channel: FeedbackChannel) -> Self {
        Self { game, regularizer, schedule, channel }
    }

    fn check_state(&self, state: &LearnerState) -> Result<()> {
        self.game.check_mixed(&state.strategies)?;
        if state.scores.len() != self.game.num_players()
            || state.scores.iter().enumerate().any(|(i, y)| y.len() != self.game.num_actions(i))
        {
            return Err(Error::DimensionMismatch("score vectors do not match the game".into()));
        }
        Ok(())
    }

    /// Runs stage `n = state.stage()` and advances the state to `n + 1`.
    ///
    /// Randomness is consumed in a fixed order: in bandit mode, one action
    /// draw per player (player 0 first), then one noise draw per player; in
    /// quantized-vector mode, one noise draw per coordinate, player-major.
    pub fn step<R: Rng + ?Sized>(&self, state: &mut LearnerState, rng: &mut R) -> Result<StageObservation> {
        self.check_state(state)?;
        let n = state.stage;
        let gamma = self.schedule.step(n);
        let mut observation = StageObservation {
            stage: n,
            step_size: gamma,
            sampling: None,
            actions: None,
            payoffs: None,
            estimates: Vec::new(),
        };

        observation.estimates = match self.channel.mode {
            FeedbackMode::ExactVector | FeedbackMode::QuantizedVector => {
                vector_feedback(self.game, &state.strategies, &self.channel, rng)?
            }
            FeedbackMode::BanditIwe => {
                let epsilon = self.schedule.exploration(n);
                let sampling: Vec<Vec<f64>> = state
                    .strategies
                    .strategies()
                    .iter()
                    .map(|x| {
                        let mut out = vec![0.0; x.len()];
                        sampling_strategy_into(x, epsilon, &mut out);
                        out
                    })
                    .collect();
                let actions: Vec<usize> = sampling.iter().map(|p| sample_action(p, rng)).collect();
                let profile = PureProfile::new(actions);
                let payoffs = realized_feedback(self.game, &profile, &self.channel, rng)?;
                let estimates = sampling
                    .iter()
                    .zip(profile.actions())
                    .zip(&payoffs)
                    .map(|((p, &a), &u)| iwe_estimate(a, u, p))
                    .collect::<Result<Vec<_>>>()?;
                state.sampling = Some(MixedProfile(sampling.clone()));
                observation.sampling = Some(sampling);
                observation.actions = Some(profile.0);
                observation.payoffs = Some(payoffs);
                estimates
            }
        };

        for (i, (y, v)) in state.scores.iter_mut().zip(&observation.estimates).enumerate() {
            let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for (ya, &va) in y.iter_mut().zip(v) {
                *ya += gamma * (va - top);
            }
            self.regularizer.choice_map_into(y, &mut state.strategies.0[i])?;
        }
        state.stage = n + 1;
        Ok(observation)
    }
}

/// Functional form of [`Ftql::step`].
pub fn ftql_step<R: Rng + ?Sized>(
    mut state: LearnerState,
    game: &Game,
    regularizer: &Regularizer,
    schedule: Schedule,
    channel: FeedbackChannel,
    rng: &mut R,
) -> Result<LearnerState> {
    Ftql::new(game, regularizer, schedule, channel).step(&mut state, rng)?;
    Ok(state)
}

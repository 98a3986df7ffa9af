use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::learner::{Ftql, LearnerState};
use crate::config::Experiment;
use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile};
use crate::regularizer::Regularizer;

/// How the initial scores of a run are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitSpec {
    /// Every score drawn i.i.d. uniform on `[lo, hi]`, player-major.
    ScoresUniform([f64; 2]),
    /// Scores chosen so the initial strategies equal the given profile.
    Strategy(Vec<Vec<f64>>),
    /// Explicit initial scores.
    Scores(Vec<Vec<f64>>),
}

impl InitSpec {
    pub fn validate(&self, game: &Game, regularizer: &Regularizer) -> Result<()> {
        match self {
            InitSpec::ScoresUniform([lo, hi]) => {
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                    return Err(Error::InvalidConfig(format!("scores-uniform needs finite lo <= hi, got [{lo}, {hi}]")));
                }
                Ok(())
            }
            InitSpec::Strategy(x) => {
                let x = MixedProfile::new(x.clone())?;
                game.check_mixed(&x)?;
                LearnerState::from_strategies(regularizer, &x).map(|_| ())
            }
            InitSpec::Scores(y) => {
                let state = LearnerState::from_scores(regularizer, y.clone())?;
                game.check_mixed(state.strategies())
            }
        }
    }

    pub fn initial_state<R: Rng + ?Sized>(&self, game: &Game, regularizer: &Regularizer, rng: &mut R) -> Result<LearnerState> {
        match self {
            InitSpec::ScoresUniform([lo, hi]) => {
                let scores = (0..game.num_players())
                    .map(|i| (0..game.num_actions(i)).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect())
                    .collect();
                LearnerState::from_scores(regularizer, scores)
            }
            InitSpec::Strategy(x) => LearnerState::from_strategies(regularizer, &MixedProfile::new(x.clone())?),
            InitSpec::Scores(y) => LearnerState::from_scores(regularizer, y.clone()),
        }
    }
}

/// Which stages of a run are written to its record.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPlan {
    pub stride: u64,
    pub extra_stages: BTreeSet<u64>,
    pub scores: bool,
}

impl Default for LogPlan {
    fn default() -> Self {
        Self { stride: 1, extra_stages: BTreeSet::new(), scores: false }
    }
}

impl LogPlan {
    /// Stage 1, the last stage, every multiple of the stride, and any extra
    /// stages.
    pub fn logs(&self, stage: u64, horizon: u64) -> bool {
        stage == 1 || stage == horizon || stage % self.stride == 0 || self.extra_stages.contains(&stage)
    }
}

/// State of one logged stage: the strategies played at stage `n` together
/// with what was sampled and observed during it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageEntry {
    pub stage: u64,
    pub strategies: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoffs: Option<Vec<f64>>,
}

impl StageEntry {
    pub fn profile(&self) -> MixedProfile {
        MixedProfile(self.strategies.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub config_hash: String,
    pub seed: u64,
    pub horizon: u64,
    pub entries: Vec<StageEntry>,
}

impl TrajectoryRecord {
    pub fn entry_at(&self, stage: u64) -> Option<&StageEntry> {
        self.entries
            .binary_search_by_key(&stage, |e| e.stage)
            .ok()
            .map(|k| &self.entries[k])
    }

    pub fn last(&self) -> Option<&StageEntry> {
        self.entries.last()
    }
}

/// Seeds one RNG per trajectory.
pub fn trajectory_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Runs stages `1..=horizon` of one trajectory. The record is a pure
/// function of `(experiment, seed)`.
pub fn run_trajectory(experiment: &Experiment, seed: u64) -> Result<TrajectoryRecord> {
    let mut rng = trajectory_rng(seed);
    let game = &experiment.game;
    let regularizer = &experiment.regularizer;
    let mut state = experiment.init.initial_state(game, regularizer, &mut rng)?;
    let dynamics = Ftql::new(game, regularizer, experiment.schedule, experiment.channel);
    let horizon = experiment.horizon;
    let plan = &experiment.log;

    let mut entries = Vec::new();
    for n in 1..=horizon {
        let logged = plan.logs(n, horizon);
        let snapshot = logged.then(|| {
            (
                state.strategies().strategies().to_vec(),
                plan.scores.then(|| state.scores().to_vec()),
            )
        });
        let observation = dynamics.step(&mut state, &mut rng)?;
        if let Some((strategies, scores)) = snapshot {
            entries.push(StageEntry {
                stage: n,
                strategies,
                scores,
                sampling: observation.sampling,
                actions: observation.actions,
                payoffs: observation.payoffs,
            });
        }
    }
    Ok(TrajectoryRecord { config_hash: experiment.config_hash.clone(), seed, horizon, entries })
}

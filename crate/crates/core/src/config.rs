//! Experiment configuration: the file schema, dotted-path overrides, and
//! resolution into a runnable [`Experiment`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::dynamics::{FeedbackChannel, FeedbackMode, InitSpec, LogPlan, NoiseModel, Schedule};
use crate::error::{Error, Result};
use crate::game::{Game, PureProfile};
use crate::quantize::QuantizationScheme;
use crate::regularizer::{Regularizer, RegularizerKind};

pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameSource {
    Inline(Game),
    /// Path to a game JSON file, relative to the config file.
    Path(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Radius of the equilibrium neighborhoods used for classification.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Number of final stages a run must stay inside a neighborhood;
    /// defaults to the last 10% of the horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dwell: Option<u64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { epsilon: DEFAULT_EPSILON, dwell: None }
    }
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Also write every logged stage of every trajectory.
    #[serde(default)]
    pub trajectories: bool,
}

/// Outcome a canned configuration is expected to produce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    /// Every logged strategy profile equals the initial one exactly.
    #[serde(default)]
    pub frozen: bool,
    /// Action labels of the equilibrium the run must converge to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Latest stage by which the run must have entered the neighborhood.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub by_stage: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub game: GameSource,
    /// Quantize the game's payoffs before play.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game_quantizer: Option<QuantizationScheme>,
    pub regularizer: RegularizerKind,
    #[serde(default)]
    pub quantizer: QuantizationScheme,
    pub feedback: FeedbackMode,
    #[serde(default)]
    pub noise: NoiseModel,
    pub schedule: Schedule,
    pub horizon: u64,
    #[serde(default = "one")]
    pub trajectories: u64,
    pub init: InitSpec,
    /// Trajectory `k` uses seed `seed + k`.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub log_stride: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub log_stages: Vec<u64>,
    #[serde(default)]
    pub log_scores: bool,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigFormat {
    Toml,
    Json,
}

impl ConfigFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => ConfigFormat::Json,
            _ => ConfigFormat::Toml,
        }
    }
}

/// Parses config text into a generic tree so overrides can be applied
/// before schema validation.
pub fn parse_tree(text: &str, format: ConfigFormat) -> Result<Value> {
    match format {
        ConfigFormat::Json => serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string())),
        ConfigFormat::Toml => toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string())),
    }
}

/// Applies one `dotted.key=value` override. The value is read as JSON when
/// it parses as JSON and as a plain string otherwise.
pub fn apply_override(tree: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::InvalidConfig(format!("override {assignment:?} is not of the form key=value")))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(Error::InvalidConfig(format!("malformed override key {key:?}")));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let mut node = tree;
    let mut parts = key.split('.').peekable();
    while let Some(part) = parts.next() {
        let map = match node {
            Value::Object(map) => map,
            _ => return Err(Error::InvalidConfig(format!("override {key:?} descends into a non-table value"))),
        };
        if parts.peek().is_none() {
            map.insert(part.to_string(), value);
            return Ok(());
        }
        node = map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("split yields at least one part")
}

impl ExperimentConfig {
    pub fn from_tree(tree: Value) -> Result<Self> {
        serde_json::from_value(tree).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Parses, applies overrides, and validates the schema.
    pub fn parse(text: &str, format: ConfigFormat, overrides: &[String]) -> Result<Self> {
        let mut tree = parse_tree(text, format)?;
        for o in overrides {
            apply_override(&mut tree, o)?;
        }
        Self::from_tree(tree)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Resolves the game source (relative paths against `base_dir`) and
    /// checks every cross-field constraint.
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<Experiment> {
        let mut config = self.clone();
        let game = match &self.game {
            GameSource::Inline(g) => g.clone(),
            GameSource::Path(p) => {
                let full = match base_dir {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p.clone(),
                };
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Error::InvalidConfig(format!("cannot read game file {}: {e}", full.display())))?;
                Game::from_json(&text)?
            }
        };
        config.game = GameSource::Inline(game.clone());
        let game = match &self.game_quantizer {
            Some(q) => game.quantize(q),
            None => game,
        };

        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be >= 1".into()));
        }
        if self.trajectories == 0 {
            return Err(Error::InvalidConfig("trajectories must be >= 1".into()));
        }
        if self.log_stride == 0 {
            return Err(Error::InvalidConfig("log_stride must be >= 1".into()));
        }
        let epsilon = self.analysis.epsilon;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidConfig(format!("analysis.epsilon must lie in (0, 1), got {epsilon}")));
        }
        let dwell = self.analysis.dwell.unwrap_or((self.horizon / 10).max(1));
        if dwell == 0 {
            return Err(Error::InvalidConfig("analysis.dwell must be >= 1".into()));
        }

        let regularizer = Regularizer::from(self.regularizer);
        let channel = FeedbackChannel::new(self.feedback, self.quantizer, self.noise)?;
        self.init.validate(&game, &regularizer)?;
        let expected_target = match self.expect.as_ref().and_then(|e| e.target.as_ref()) {
            Some(labels) => Some(game.profile_from_labels(labels)?),
            None => None,
        };

        let config_hash = hash_config(&config);
        Ok(Experiment {
            game,
            regularizer,
            schedule: self.schedule,
            channel,
            init: self.init.clone(),
            horizon: self.horizon,
            trajectories: self.trajectories,
            seed: self.seed,
            log: LogPlan {
                stride: self.log_stride,
                extra_stages: self.log_stages.iter().copied().collect(),
                scores: self.log_scores,
            },
            epsilon,
            dwell,
            expected_target,
            config_hash,
            config,
        })
    }
}

/// Hex SHA-256 of the canonical JSON form, truncated to 16 characters.
pub fn hash_config(config: &ExperimentConfig) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// A validated, runnable experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    /// The game actually played (after `game_quantizer`, if any).
    pub game: Game,
    pub regularizer: Regularizer,
    pub schedule: Schedule,
    pub channel: FeedbackChannel,
    pub init: InitSpec,
    pub horizon: u64,
    pub trajectories: u64,
    pub seed: u64,
    pub log: LogPlan,
    pub epsilon: f64,
    pub dwell: u64,
    pub expected_target: Option<PureProfile>,
    pub config_hash: String,
    /// The source configuration with the game inlined.
    pub config: ExperimentConfig,
}

impl Experiment {
    /// Seed of trajectory `k` of the batch.
    pub fn trajectory_seed(&self, k: u64) -> u64 {
        self.seed.wrapping_add(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
regularizer = "entropic"
feedback = "bandit-iwe"
horizon = 100
trajectories = 4
seed = 3
quantizer = { rule = "half-away", error = 1.5 }
noise = { kind = "uniform", bound = 0.1 }
schedule = { p = 0.75, q = 0.25 }
init = { scores-uniform = [0.0, 1.0] }

[game]
actions = [["a1", "a2"], ["b1", "b2"]]
payoffs = [[[5.1, 2.4], [2.4, 5.1]], [[5.1, 2.4], [2.4, 5.1]]]
"#;

    #[test]
    fn parses_toml() {
        let cfg = ExperimentConfig::parse(BASE, ConfigFormat::Toml, &[]).unwrap();
        assert_eq!(cfg.quantizer, QuantizationScheme::half_away(1.5).unwrap());
        assert_eq!(cfg.schedule, Schedule::new(1.0, 0.75, 1.0, 0.25).unwrap());
        assert_eq!(cfg.init, InitSpec::ScoresUniform([0.0, 1.0]));
        let exp = cfg.resolve(None).unwrap();
        assert_eq!(exp.dwell, 10);
        assert_eq!(exp.trajectory_seed(2), 5);
    }

    #[test]
    fn overrides() {
        let cfg = ExperimentConfig::parse(
            BASE,
            ConfigFormat::Toml,
            &["quantizer.error=0".into(), "seed=7".into(), "analysis.dwell=20".into(), "regularizer=euclidean".into()],
        )
        .unwrap();
        assert!(cfg.quantizer.is_identity());
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.analysis.dwell, Some(20));
        assert_eq!(cfg.regularizer, RegularizerKind::Euclidean);
        assert!(ExperimentConfig::parse(BASE, ConfigFormat::Toml, &["seed".into()]).is_err());
        assert!(ExperimentConfig::parse(BASE, ConfigFormat::Toml, &["seed.x=1".into()]).is_err());
        assert!(ExperimentConfig::parse(BASE, ConfigFormat::Toml, &["a..b=1".into()]).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for o in ["colour=1", "schedule.r=2", "quantizer.mode=3", "analysis.x=1"] {
            let err = ExperimentConfig::parse(BASE, ConfigFormat::Toml, &[o.to_string()]);
            assert!(err.is_err(), "{o} accepted");
        }
    }

    #[test]
    fn cross_field_validation() {
        let bad = [
            "horizon=0",
            "trajectories=0",
            "log_stride=0",
            "analysis.epsilon=1.5",
            "analysis.dwell=0",
            "feedback=\"exact-vector\"",
            "init={\"strategy\": [[1.0, 0.0], [0.5, 0.5]]}",
            "expect={\"target\": [\"a1\", \"zz\"]}",
        ];
        for o in bad {
            let cfg = ExperimentConfig::parse(BASE, ConfigFormat::Toml, &[o.to_string()]);
            assert!(cfg.and_then(|c| c.resolve(None)).is_err(), "{o} accepted");
        }
    }

    #[test]
    fn echo_round_trips() {
        let cfg = ExperimentConfig::parse(BASE, ConfigFormat::Toml, &["log_stages=[50]".into()]).unwrap();
        let json = cfg.to_json_pretty();
        assert_eq!(ExperimentConfig::parse(&json, ConfigFormat::Json, &[]).unwrap(), cfg);
        let toml = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::parse(&toml, ConfigFormat::Toml, &[]).unwrap(), cfg);
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::parse(BASE, ConfigFormat::Toml, &[]).unwrap();
        let b = ExperimentConfig::parse(BASE, ConfigFormat::Toml, &["seed=4".into()]).unwrap();
        assert_eq!(hash_config(&a), hash_config(&a.clone()));
        assert_ne!(hash_config(&a), hash_config(&b));
        assert_eq!(hash_config(&a).len(), 16);
    }
}

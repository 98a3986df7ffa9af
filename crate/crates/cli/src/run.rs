//! The `run` subcommand.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use ftql::analysis::heatmap;
use ftql::batch::{run_batch, TrajectoryResult};
use ftql::config::Experiment;
use serde::{Deserialize, Serialize};

use crate::artifacts::{heatmap_file_name, rates_csv, trajectories_jsonl, verdicts_csv, ArtifactSet};
use crate::{runtime, CliError};

pub const DEFAULT_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config_hash: String,
    pub base_seed: u64,
    pub trajectories: u64,
    pub horizon: u64,
    pub schedule_valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_warning: Option<String>,
    pub epsilon: f64,
    pub dwell: u64,
    /// Trajectories classified as converging to each strict equilibrium
    /// (every strict equilibrium is listed, possibly with count 0).
    pub attractors: BTreeMap<String, u64>,
    pub unconverged: u64,
    pub convergence_fraction: f64,
    /// Pure profile nearest to each run's final strategies.
    pub nearest_profiles: BTreeMap<String, u64>,
}

pub fn summarize(experiment: &Experiment, results: &[TrajectoryResult]) -> Result<RunSummary, CliError> {
    let game = &experiment.game;
    let mut attractors: BTreeMap<String, u64> = game
        .enumerate_strict_nash()
        .map_err(runtime)?
        .iter()
        .map(|eq| (game.profile_label(eq), 0))
        .collect();
    let mut nearest_profiles = BTreeMap::new();
    let mut unconverged = 0;
    for r in results {
        match &r.verdict.target {
            Some(t) => *attractors.entry(game.profile_label(t)).or_insert(0) += 1,
            None => unconverged += 1,
        }
        *nearest_profiles.entry(game.profile_label(&r.verdict.nearest_profile)).or_insert(0) += 1;
    }
    let n = results.len() as u64;
    Ok(RunSummary {
        config_hash: experiment.config_hash.clone(),
        base_seed: experiment.seed,
        trajectories: n,
        horizon: experiment.horizon,
        schedule_valid: experiment.schedule.is_valid(),
        schedule_warning: experiment.schedule.validity_warning(),
        epsilon: experiment.epsilon,
        dwell: experiment.dwell,
        attractors,
        unconverged,
        convergence_fraction: (n - unconverged) as f64 / n.max(1) as f64,
        nearest_profiles,
    })
}

/// Stages with a heat map in a 2x2 run: the first, the last, and every
/// extra logged stage.
pub fn snapshot_stages(experiment: &Experiment) -> Vec<u64> {
    let mut stages: BTreeSet<u64> = [1, experiment.horizon].into();
    stages.extend(experiment.log.extra_stages.iter().copied().filter(|&s| s <= experiment.horizon));
    stages.into_iter().collect()
}

fn is_two_by_two(experiment: &Experiment) -> bool {
    let g = &experiment.game;
    g.num_players() == 2 && g.num_actions(0) == 2 && g.num_actions(1) == 2
}

/// Runs the batch and renders every artifact.
pub fn run_experiment(
    experiment: &Experiment,
    workers: Option<usize>,
    bins: usize,
) -> Result<(RunSummary, ArtifactSet), CliError> {
    let results = run_batch(experiment, workers).map_err(runtime)?;
    let summary = summarize(experiment, &results)?;
    let mut files = ArtifactSet::new();
    files.add_json("config.json", &experiment.config);
    files.add_text("verdicts.csv", verdicts_csv(experiment, &results));
    files.add_text("rates.csv", rates_csv(experiment, &results));
    files.add_json("summary.json", &summary);
    if experiment.config.output.trajectories {
        files.add_text("trajectories.jsonl", trajectories_jsonl(&results));
    }
    if is_two_by_two(experiment) {
        let records: Vec<_> = results.into_iter().map(|r| r.record).collect();
        for stage in snapshot_stages(experiment) {
            let mut map = heatmap(&records, stage, bins).map_err(runtime)?;
            map.ell = Some(experiment.channel.quantizer.error());
            files.add_json(heatmap_file_name(&map, false), &map);
        }
    }
    Ok((summary, files))
}

/// Output directory: explicit flag, then the config's `output.dir`, then
/// `runs/<config hash>`.
pub fn output_dir(experiment: &Experiment, explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| experiment.config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("runs").join(&experiment.config_hash))
}

//! The `reproduce-figure` subcommand: bandit learning in the 2x2
//! coordination game under grids `l = 0, 1.5, 4`, summarized as heat maps
//! of the strategy distribution at three snapshot stages.

use std::collections::BTreeMap;

use ftql::analysis::{convergence_fraction, heatmap};
use ftql::batch::run_batch;
use ftql::config::{ConfigFormat, Experiment};
use serde::{Deserialize, Serialize};

use crate::artifacts::{heatmap_file_name, ArtifactSet};
use crate::canned::FIG1;
use crate::{experiment_from_text, runtime, CliError};

pub const GRIDS: [f64; 3] = [0.0, 1.5, 4.0];
pub const BASE_TRAJECTORIES: u64 = 500;
pub const BASE_HORIZON: u64 = 2000;
pub const BASE_DWELL: u64 = 200;
/// Early snapshot used to compare convergence speed across grids.
pub const EARLY_STAGE: u64 = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub ell: f64,
    pub trajectories: u64,
    pub horizon: u64,
    pub stages: Vec<u64>,
    /// Share of runs classified as converging to a strict equilibrium.
    pub converged_fraction: f64,
    /// Share of runs inside an equilibrium neighborhood at the early stage.
    pub early_fraction: f64,
    /// Share of runs whose final strategies are nearest to each pure profile.
    pub nearest_fractions: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureSummary {
    pub scale: f64,
    pub bins: usize,
    pub schedule_warning: Option<String>,
    pub panels: Vec<Panel>,
}

/// The figure's experiment for grid `ell`, with trajectory count, horizon
/// and dwell scaled by `scale`.
pub fn figure_experiment(ell: f64, scale: f64) -> Result<Experiment, CliError> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(CliError::Config(format!("scale must lie in (0, 1], got {scale}")));
    }
    let scaled = |n: u64| ((n as f64 * scale).round() as u64).max(1);
    let horizon = scaled(BASE_HORIZON);
    if horizon < EARLY_STAGE {
        return Err(CliError::Config(format!(
            "scale {scale} gives horizon {horizon}, shorter than the stage-{EARLY_STAGE} snapshot"
        )));
    }
    let overrides = [
        format!("quantizer.error={ell}"),
        format!("trajectories={}", scaled(BASE_TRAJECTORIES)),
        format!("horizon={horizon}"),
        format!("analysis.dwell={}", scaled(BASE_DWELL)),
    ];
    experiment_from_text(FIG1, ConfigFormat::Toml, &overrides, None)
}

pub fn reproduce_figure(
    scale: f64,
    bins: usize,
    workers: Option<usize>,
) -> Result<(FigureSummary, ArtifactSet), CliError> {
    if bins == 0 {
        return Err(CliError::Config("bins must be >= 1".into()));
    }
    let mut files = ArtifactSet::new();
    let mut panels = Vec::new();
    let mut schedule_warning = None;
    for ell in GRIDS {
        let experiment = figure_experiment(ell, scale)?;
        schedule_warning = experiment.schedule.validity_warning();
        let results = run_batch(&experiment, workers).map_err(runtime)?;
        let n = results.len() as f64;
        let game = &experiment.game;
        let converged = results.iter().filter(|r| r.verdict.target.is_some()).count() as f64 / n;
        let mut nearest: BTreeMap<String, u64> = game.profiles().map(|p| (game.profile_label(&p), 0)).collect();
        for r in &results {
            *nearest.entry(game.profile_label(&r.verdict.nearest_profile)).or_insert(0) += 1;
        }
        let nearest_fractions = nearest.into_iter().map(|(k, c)| (k, c as f64 / n)).collect();
        let records: Vec<_> = results.into_iter().map(|r| r.record).collect();
        let early_fraction =
            convergence_fraction(&records, game, EARLY_STAGE, experiment.epsilon).map_err(runtime)?;
        let stages = vec![1, EARLY_STAGE, experiment.horizon];
        for &stage in &stages {
            let mut map = heatmap(&records, stage, bins).map_err(runtime)?;
            map.ell = Some(ell);
            files.add_json(heatmap_file_name(&map, true), &map);
        }
        panels.push(Panel {
            ell,
            trajectories: experiment.trajectories,
            horizon: experiment.horizon,
            stages,
            converged_fraction: converged,
            early_fraction,
            nearest_fractions,
        });
    }
    let summary = FigureSummary { scale, bins, schedule_warning, panels };
    files.add_json("figure_summary.json", &summary);
    Ok((summary, files))
}

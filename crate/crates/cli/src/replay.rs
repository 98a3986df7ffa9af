//! The `replay-example` subcommand: runs a canned deterministic setup and
//! checks the outcome it is expected to produce.

use ftql::analysis::{classify_trajectory, in_neighborhood};
use ftql::config::ConfigFormat;
use ftql::dynamics::run_trajectory;
use serde::Serialize;

use crate::canned::example_config;
use crate::{experiment_from_text, runtime, CliError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayReport {
    pub name: String,
    /// The predicate that was checked.
    pub predicate: String,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for ReplayReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {} ({})", self.name, self.predicate, self.detail)
    }
}

pub fn replay_example(name: &str) -> Result<ReplayReport, CliError> {
    let text = example_config(name).ok_or_else(|| CliError::Config(format!("unknown example {name:?}")))?;
    let mut experiment = experiment_from_text(text, ConfigFormat::Toml, &[], None)?;
    experiment.log.stride = 1;
    let expect = experiment
        .config
        .expect
        .clone()
        .ok_or_else(|| CliError::Config(format!("example {name} has no expectation")))?;
    let record = run_trajectory(&experiment, experiment.seed).map_err(runtime)?;
    let horizon = experiment.horizon;

    if expect.frozen {
        let first = &record.entries[0].strategies;
        let moved = record.entries.iter().find(|e| &e.strategies != first);
        return Ok(ReplayReport {
            name: name.into(),
            predicate: format!("x_n = x_1 exactly for n = 1..{horizon}"),
            pass: moved.is_none(),
            detail: match moved {
                None => format!("x_1 = {first:?}"),
                Some(e) => format!("x changed at stage {} to {:?}", e.stage, e.strategies),
            },
        });
    }

    let target = experiment
        .expected_target
        .clone()
        .ok_or_else(|| CliError::Config(format!("example {name} expects neither a freeze nor a target")))?;
    let epsilon = expect.epsilon.unwrap_or(experiment.epsilon);
    let by_stage = expect.by_stage.unwrap_or(horizon);
    let label = experiment.game.profile_label(&target);
    let verdict = classify_trajectory(&record, &experiment.game, epsilon, experiment.dwell).map_err(runtime)?;
    let entered_in_time = record
        .entries
        .iter()
        .filter(|e| e.stage >= by_stage)
        .all(|e| in_neighborhood(&e.profile(), &target, epsilon));
    let pass = verdict.target.as_ref() == Some(&target) && entered_in_time;
    Ok(ReplayReport {
        name: name.into(),
        predicate: format!("converges to {label} within eps = {epsilon} by stage {by_stage}"),
        pass,
        detail: format!(
            "classified target {}, entered at {}, final distance {:e}",
            verdict.target.as_ref().map_or("none".into(), |t| experiment.game.profile_label(t)),
            verdict.entered_at.map_or("never".into(), |n| n.to_string()),
            verdict.final_distance
        ),
    })
}

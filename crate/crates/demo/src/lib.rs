//! Browser bindings for the interactive page in `www/`. Each export takes
//! plain numbers or strings and returns a JSON string.

use ftql::analysis::{classify_trajectory, convergence_fraction, heatmap};
use ftql::batch::run_batch;
use ftql::config::{ConfigFormat, Experiment, ExperimentConfig};
use ftql::dynamics::run_trajectory;
use ftql::{QuantizationScheme, Rule};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const FIG1: &str = include_str!("../../../configs/fig1.toml");
const EXAMPLES: [(&str, &str); 4] = [
    ("ex1-i", include_str!("../../../configs/ex1-i.toml")),
    ("ex1-ii", include_str!("../../../configs/ex1-ii.toml")),
    ("ex2-i", include_str!("../../../configs/ex2-i.toml")),
    ("ex2-ii", include_str!("../../../configs/ex2-ii.toml")),
];

/// Largest batch the page will run in one call.
pub const MAX_WORK: u64 = 2_000_000;

fn experiment(text: &str, overrides: &[String]) -> Result<Experiment, String> {
    ExperimentConfig::parse(text, ConfigFormat::Toml, overrides)
        .and_then(|c| c.resolve(None))
        .map_err(|e| e.to_string())
}

fn parse_rule(rule: &str) -> Result<Rule, String> {
    serde_json::from_value(Value::String(rule.into())).map_err(|_| format!("unknown rule {rule:?}"))
}

/// Samples `Q(v)` at `points` evenly spaced values of `v` in `[lo, hi]`.
pub fn quantize_curve_json(rule: &str, error: f64, lo: f64, hi: f64, points: usize) -> Result<String, String> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || !(2..=10_000).contains(&points) {
        return Err("need finite lo < hi and 2..=10000 points".into());
    }
    let q = QuantizationScheme::new(parse_rule(rule)?, error).map_err(|e| e.to_string())?;
    let v: Vec<f64> = (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect();
    let qv = v.iter().map(|&x| q.quantize(x)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    Ok(json!({ "rule": q.rule(), "error": q.error(), "spacing": q.grid_spacing(), "v": v, "q": qv }).to_string())
}

/// Runs the bandit coordination experiment on grid `ell` and returns heat
/// maps of `(x_{1,a1}, x_{2,b1})` at stages 1, 50 (when reached) and the
/// horizon.
pub fn figure_heatmaps_json(ell: f64, trajectories: u64, horizon: u64, bins: usize, seed: u64) -> Result<String, String> {
    if trajectories == 0 || horizon == 0 || bins == 0 {
        return Err("trajectories, horizon and bins must be positive".into());
    }
    if trajectories.saturating_mul(horizon) > MAX_WORK {
        return Err(format!("trajectories x horizon must stay below {MAX_WORK}"));
    }
    let dwell = (horizon / 10).max(1);
    let overrides = [
        format!("quantizer.error={ell}"),
        format!("trajectories={trajectories}"),
        format!("horizon={horizon}"),
        format!("seed={seed}"),
        format!("analysis.dwell={dwell}"),
    ];
    let exp = experiment(FIG1, &overrides)?;
    let results = run_batch(&exp, Some(1)).map_err(|e| e.to_string())?;
    let converged = results.iter().filter(|r| r.verdict.target.is_some()).count() as f64 / results.len() as f64;
    let records: Vec<_> = results.into_iter().map(|r| r.record).collect();
    let mut stages = vec![1];
    if horizon > 50 {
        stages.push(50);
    }
    if horizon > 1 {
        stages.push(horizon);
    }
    let maps = stages
        .iter()
        .map(|&s| {
            let mut m = heatmap(&records, s, bins)?;
            m.ell = Some(ell);
            Ok(m)
        })
        .collect::<ftql::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let in_neighborhood = stages
        .iter()
        .map(|&s| convergence_fraction(&records, &exp.game, s, exp.epsilon))
        .collect::<ftql::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "ell": ell,
        "trajectories": trajectories,
        "horizon": horizon,
        "converged_fraction": converged,
        "in_neighborhood": in_neighborhood,
        "maps": maps,
    })
    .to_string())
}

/// Replays a bundled example and returns the path of `(x_{1,a1}, x_{2,b1})`
/// with the checked outcome.
pub fn replay_json(name: &str) -> Result<String, String> {
    let text = EXAMPLES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).ok_or(format!("unknown example {name:?}"))?;
    let mut exp = experiment(text, &[])?;
    exp.log.stride = 1;
    let record = run_trajectory(&exp, exp.seed).map_err(|e| e.to_string())?;
    let frozen = exp.config.expect.as_ref().is_some_and(|e| e.frozen);
    let first = &record.entries[0].strategies;
    let (predicate, pass) = if frozen {
        ("x_n = x_1 exactly".to_string(), record.entries.iter().all(|e| &e.strategies == first))
    } else {
        let target = exp.expected_target.clone().ok_or("example has no target")?;
        let v = classify_trajectory(&record, &exp.game, exp.epsilon, exp.dwell).map_err(|e| e.to_string())?;
        (format!("converges to {}", exp.game.profile_label(&target)), v.target == Some(target))
    };
    let stages: Vec<u64> = record.entries.iter().map(|e| e.stage).collect();
    let x1: Vec<f64> = record.entries.iter().map(|e| e.strategies[0][0]).collect();
    let x2: Vec<f64> = record.entries.iter().map(|e| e.strategies[1][0]).collect();
    Ok(json!({ "name": name, "predicate": predicate, "pass": pass, "stages": stages, "x1": x1, "x2": x2 }).to_string())
}

#[wasm_bindgen]
pub fn quantize_curve(rule: &str, error: f64, lo: f64, hi: f64, points: usize) -> Result<String, JsError> {
    quantize_curve_json(rule, error, lo, hi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn figure_heatmaps(ell: f64, trajectories: u32, horizon: u32, bins: u32, seed: u32) -> Result<String, JsError> {
    figure_heatmaps_json(ell, trajectories.into(), horizon.into(), bins as usize, seed.into())
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn replay(name: &str) -> Result<String, JsError> {
    replay_json(name).map_err(|e| JsError::new(&e))
}

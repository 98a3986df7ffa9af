//! Output files. Everything is rendered in memory first and written by a
//! single writer once the batch has finished; each file goes through a
//! temporary name and a rename so readers never see partial files.

use std::path::{Path, PathBuf};

use ftql::analysis::{fit_rate, finite_time_check, Heatmap};
use ftql::batch::TrajectoryResult;
use ftql::config::Experiment;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Default)]
pub struct ArtifactSet {
    files: Vec<(String, Vec<u8>)>,
}

impl ArtifactSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_text(&mut self, name: impl Into<String>, text: String) {
        self.files.push((name.into(), text.into_bytes()));
    }

    pub fn add_json<T: Serialize>(&mut self, name: impl Into<String>, value: &T) {
        let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
        text.push('\n');
        self.add_text(name, text);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        let io = |what: &str, p: &Path, e: std::io::Error| CliError::Io(format!("{what} {}: {e}", p.display()));
        std::fs::create_dir_all(dir).map_err(|e| io("cannot create", dir, e))?;
        let mut written = Vec::new();
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            let tmp = dir.join(format!(".{name}.tmp"));
            std::fs::write(&tmp, bytes).map_err(|e| io("cannot write", &tmp, e))?;
            std::fs::rename(&tmp, &path).map_err(|e| io("cannot rename to", &path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn csv_string<F>(header: &[&str], fill: F) -> String
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    fill(&mut w).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `seed,target,entered_at,final_distance`, one row per trajectory in
/// trajectory order. Missing values are empty.
pub fn verdicts_csv(experiment: &Experiment, results: &[TrajectoryResult]) -> String {
    csv_string(&["seed", "target", "entered_at", "final_distance"], |w| {
        for r in results {
            let target = r.verdict.target.as_ref().map(|t| experiment.game.profile_label(t));
            w.write_record([
                r.record.seed.to_string(),
                opt(target),
                opt(r.verdict.entered_at),
                r.verdict.final_distance.to_string(),
            ])?;
        }
        Ok(())
    })
}

/// Convergence-rate rows for every trajectory with a target: a log-linear
/// fit for entropic runs, the exact hitting stage for Euclidean ones.
/// Fits that cannot be computed leave their numeric columns empty and say
/// why in `note`.
pub fn rates_csv(experiment: &Experiment, results: &[TrajectoryResult]) -> String {
    let header =
        ["seed", "target", "method", "exponent", "slope", "intercept", "r_squared", "points", "conforming", "finite_stage", "note"];
    csv_string(&header, |w| {
        for r in results {
            let Some(target) = &r.verdict.target else { continue };
            let seed = r.record.seed.to_string();
            let label = experiment.game.profile_label(target);
            let mut row = vec![seed, label];
            if experiment.regularizer.is_steep() {
                row.push("fit".into());
                match fit_rate(&r.record, target, &experiment.regularizer, &experiment.schedule) {
                    Ok(fit) => row.extend([
                        fit.exponent.to_string(),
                        fit.slope.to_string(),
                        fit.intercept.to_string(),
                        fit.r_squared.to_string(),
                        fit.points.to_string(),
                        fit.conforming.to_string(),
                        String::new(),
                        String::new(),
                    ]),
                    Err(e) => {
                        row.extend(std::iter::repeat_n(String::new(), 7));
                        row.push(e.to_string());
                    }
                }
            } else {
                row.push("finite-time".into());
                row.extend(std::iter::repeat_n(String::new(), 6));
                row.push(opt(finite_time_check(&r.record, target)));
                row.push(String::new());
            }
            w.write_record(&row)?;
        }
        Ok(())
    })
}

/// One JSON object per line, one line per trajectory record.
pub fn trajectories_jsonl(results: &[TrajectoryResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(&r.record).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// `heatmap_stage{n}.json`, or `heatmap_ell{l}_stage{n}.json` with a grid
/// label.
pub fn heatmap_file_name(map: &Heatmap, with_ell: bool) -> String {
    match (with_ell, map.ell) {
        (true, Some(ell)) => format!("heatmap_ell{ell}_stage{}.json", map.stage),
        _ => format!("heatmap_stage{}.json", map.stage),
    }
}

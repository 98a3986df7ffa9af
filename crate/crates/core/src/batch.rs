//! Independent trajectories of one experiment, optionally run in parallel.
//!
//! Trajectory `k` draws from its own generator seeded with `seed + k`, so
//! results do not depend on the number of workers.

use serde::{Deserialize, Serialize};

use crate::analysis::{classify_trajectory, ConvergenceVerdict};
use crate::config::Experiment;
use crate::dynamics::{run_trajectory, TrajectoryRecord};
use crate::error::Result;
#[cfg(feature = "parallel")]
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryResult {
    pub record: TrajectoryRecord,
    pub verdict: ConvergenceVerdict,
}

fn run_one(experiment: &Experiment, k: u64) -> Result<TrajectoryResult> {
    let record = run_trajectory(experiment, experiment.trajectory_seed(k))?;
    let verdict = classify_trajectory(&record, &experiment.game, experiment.epsilon, experiment.dwell)?;
    Ok(TrajectoryResult { record, verdict })
}

/// Runs every trajectory of the experiment, in trajectory order.
///
/// `workers = Some(1)` runs serially; `None` uses all available cores.
/// Without the `parallel` feature everything runs serially.
pub fn run_batch(experiment: &Experiment, workers: Option<usize>) -> Result<Vec<TrajectoryResult>> {
    let ks = 0..experiment.trajectories;
    #[cfg(feature = "parallel")]
    if workers != Some(1) {
        use rayon::prelude::*;
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = workers {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| Error::ThreadPool(e.to_string()))?;
        return pool.install(|| ks.into_par_iter().map(|k| run_one(experiment, k)).collect());
    }
    let _ = workers;
    ks.map(|k| run_one(experiment, k)).collect()
}

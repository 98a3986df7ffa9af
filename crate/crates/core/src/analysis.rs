//! Convergence detection, normal-cone geometry at pure profiles, rate fits,
//! and heat-map aggregation over batches of trajectories.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_EPSILON;
use crate::dynamics::{Schedule, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, PureProfile};
use crate::regularizer::Regularizer;

/// Rate fits need at least this many usable stages.
pub const MIN_FIT_POINTS: usize = 10;

/// Distances at or below this are treated as exact zeros by rate fits.
pub const FIT_DISTANCE_FLOOR: f64 = 10.0 * f64::EPSILON;

/// A fit is called conforming when it decays with at least this `R²`.
pub const MIN_CONFORMING_R2: f64 = 0.9;

/// True iff every player puts more than `1 - ε` on their equilibrium action.
pub fn in_neighborhood(x: &MixedProfile, eq: &PureProfile, epsilon: f64) -> bool {
    x.strategies()
        .iter()
        .zip(eq.actions())
        .all(|(xi, &a)| xi.get(a).is_some_and(|&p| p > 1.0 - epsilon))
}

fn check_dual(game: &Game, w: &[Vec<f64>]) -> Result<()> {
    if w.len() != game.num_players() || w.iter().enumerate().any(|(i, wi)| wi.len() != game.num_actions(i)) {
        return Err(Error::DimensionMismatch("dual vector does not match the game's action sets".into()));
    }
    Ok(())
}

/// `max_{i, α} (w_{iα} - w_{i a*_i})`; nonpositive iff `w` lies in the
/// normal cone of the strategy space at the vertex `eq`.
pub fn cone_margin(game: &Game, eq: &PureProfile, w: &[Vec<f64>]) -> Result<f64> {
    game.check_pure(eq)?;
    check_dual(game, w)?;
    Ok(w.iter()
        .zip(eq.actions())
        .flat_map(|(wi, &star)| wi.iter().map(move |&v| v - wi[star]))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Membership of `w` in the normal cone at the vertex `eq`:
/// `w_{iα} <= w_{i a*_i}` for every player and action.
pub fn normal_cone_contains(game: &Game, eq: &PureProfile, w: &[Vec<f64>]) -> Result<bool> {
    Ok(cone_margin(game, eq, w)? <= 0.0)
}

/// Result of [`ball_in_cone_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallCheck {
    /// Exact verdict from the extreme points of the ball.
    pub contained: bool,
    pub samples: usize,
    /// Sampled points of the ball that fell outside the cone.
    pub sampled_outside: usize,
}

/// Decides whether the sup-norm ball of the given radius around the
/// equilibrium payoff vector `v(x*)` lies in the normal cone at `x*`.
///
/// The worst point of the ball for coordinate pair `(α, a*_i)` raises `w_α`
/// and lowers `w_{a*}` by the radius, so containment holds iff
/// `v_α - v_{a*} + 2·radius <= 0` throughout. `samples` random points of
/// the ball (half of them corners) are checked as a cross-validation.
pub fn ball_in_cone_check<R: Rng + ?Sized>(
    game: &Game,
    eq: &PureProfile,
    radius: f64,
    samples: usize,
    rng: &mut R,
) -> Result<BallCheck> {
    if !(radius >= 0.0) {
        return Err(Error::Analysis(format!("radius must be >= 0, got {radius}")));
    }
    game.min_payoff_gap(eq)?;
    let center = game.payoff_vectors(&MixedProfile::pure(game, eq)?)?;
    // Payoff differences carry rounding error; a ball touching the cone's
    // boundary counts as contained.
    let tol = 1e-12 * center.iter().flatten().fold(radius, |m, v| m.max(v.abs())).max(1.0);
    let mut contained = true;
    for (vi, &star) in center.iter().zip(eq.actions()) {
        for (alpha, &v) in vi.iter().enumerate() {
            if alpha != star && v - vi[star] + 2.0 * radius > tol {
                contained = false;
            }
        }
    }
    let mut sampled_outside = 0;
    for s in 0..samples {
        let corner = s % 2 == 0;
        let w: Vec<Vec<f64>> = center
            .iter()
            .map(|vi| {
                vi.iter()
                    .map(|&v| {
                        let t: f64 = rng.random();
                        let offset = if corner { if t < 0.5 { -1.0 } else { 1.0 } } else { 2.0 * t - 1.0 };
                        v + radius * offset
                    })
                    .collect()
            })
            .collect();
        if cone_margin(game, eq, &w)? > tol {
            sampled_outside += 1;
        }
    }
    Ok(BallCheck { contained, samples, sampled_outside })
}

/// Verdict on a single trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    /// Strict equilibrium whose neighborhood the run ends in.
    pub target: Option<PureProfile>,
    /// First logged stage after which the run never left the neighborhood.
    pub entered_at: Option<u64>,
    /// Summed l1 distance of the final logged profile to the target, or to
    /// the nearest pure profile when there is no target.
    pub final_distance: f64,
    pub neighborhood_eps: f64,
    /// Pure profile closest to the final logged strategies.
    pub nearest_profile: PureProfile,
}

/// Per-player modal action (lowest index on ties).
pub fn nearest_pure(x: &MixedProfile) -> PureProfile {
    PureProfile::new(
        x.strategies()
            .iter()
            .map(|xi| xi.iter().enumerate().fold(0, |best, (a, &p)| if p > xi[best] { a } else { best }))
            .collect(),
    )
}

/// First logged stage from which every later logged profile lies in the
/// `ε`-neighborhood of `eq`.
fn entry_stage(record: &TrajectoryRecord, eq: &PureProfile, epsilon: f64) -> Option<u64> {
    let mut entered = None;
    for entry in record.entries.iter().rev() {
        if in_neighborhood(&entry.profile(), eq, epsilon) {
            entered = Some(entry.stage);
        } else {
            break;
        }
    }
    entered
}

/// Classifies a run by the strict equilibrium it settles at: the run must
/// sit in the equilibrium's `ε`-neighborhood for its final `dwell` stages
/// (all logged stages `n > last - dwell`).
pub fn classify_trajectory(
    record: &TrajectoryRecord,
    game: &Game,
    epsilon: f64,
    dwell: u64,
) -> Result<ConvergenceVerdict> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Analysis(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if dwell == 0 {
        return Err(Error::Analysis("dwell must be >= 1".into()));
    }
    let last = record.last().ok_or_else(|| Error::Analysis("empty trajectory record".into()))?;
    let window_start = last.stage.saturating_sub(dwell);
    let window: Vec<MixedProfile> = record
        .entries
        .iter()
        .filter(|e| e.stage > window_start)
        .map(|e| e.profile())
        .collect();
    let final_profile = last.profile();
    game.check_mixed(&final_profile)?;

    let target = game
        .enumerate_strict_nash()?
        .into_iter()
        .find(|eq| window.iter().all(|x| in_neighborhood(x, eq, epsilon)));
    let entered_at = target.as_ref().and_then(|eq| entry_stage(record, eq, epsilon));
    let nearest_profile = nearest_pure(&final_profile);
    let final_distance = final_profile.l1_distance_to_pure(target.as_ref().unwrap_or(&nearest_profile));
    Ok(ConvergenceVerdict { target, entered_at, final_distance, neighborhood_eps: epsilon, nearest_profile })
}

/// Least-squares fit of `log ||x_n - x*||_1` against `n^(1-p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Step exponent `p` of the schedule.
    pub exponent: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
    /// Negative slope with `R² > MIN_CONFORMING_R2`.
    pub conforming: bool,
}

/// Time proxy for `Σ_{k<=n} γ_k`: `n^(1-p)`, or `ln n` when `p = 1`.
pub fn elapsed_time_proxy(n: u64, p: f64) -> f64 {
    if p == 1.0 {
        (n as f64).ln()
    } else {
        (n as f64).powf(1.0 - p)
    }
}

/// Ordinary least squares; returns `(slope, intercept, r²)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r2 = if syy > 1e-24 * n * my.abs().max(1.0).powi(2) {
        let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        1.0 - ss_res / syy
    } else {
        0.0
    };
    (slope, intercept, r2)
}

/// Fits the exponential-in-`n^(1-p)` decay of the distance to `eq` over the
/// stages after the run enters the default neighborhood of `eq`. Stages at
/// exact (floating-point) convergence are skipped.
pub fn fit_rate(
    record: &TrajectoryRecord,
    eq: &PureProfile,
    regularizer: &Regularizer,
    schedule: &Schedule,
) -> Result<RateFit> {
    if !regularizer.is_steep() {
        return Err(Error::Analysis(
            "rate fits need a steep regularizer; use finite_time_check for non-steep ones".into(),
        ));
    }
    let entered = entry_stage(record, eq, DEFAULT_EPSILON)
        .ok_or_else(|| Error::Analysis("trajectory does not converge to the given profile".into()))?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = record
        .entries
        .iter()
        .filter(|e| e.stage >= entered)
        .filter_map(|e| {
            let d = e.profile().l1_distance_to_pure(eq);
            (d > FIT_DISTANCE_FLOOR).then(|| (elapsed_time_proxy(e.stage, schedule.p()), d.ln()))
        })
        .unzip();
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::Analysis(format!(
            "only {} usable stages for the rate fit, need {MIN_FIT_POINTS}",
            xs.len()
        )));
    }
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    Ok(RateFit {
        exponent: schedule.p(),
        slope,
        intercept,
        r_squared,
        points: xs.len(),
        conforming: slope < 0.0 && r_squared > MIN_CONFORMING_R2,
    })
}

/// First logged stage at which the strategies equal the point mass on `eq`
/// exactly and stay there for the rest of the record.
pub fn finite_time_check(record: &TrajectoryRecord, eq: &PureProfile) -> Option<u64> {
    let is_vertex = |strategies: &[Vec<f64>]| {
        strategies.len() == eq.actions().len()
            && strategies.iter().zip(eq.actions()).all(|(xi, &star)| {
                xi.iter().enumerate().all(|(a, &p)| if a == star { p == 1.0 } else { p == 0.0 })
            })
    };
    let mut hit = None;
    for entry in record.entries.iter().rev() {
        if is_vertex(&entry.strategies) {
            hit = Some(entry.stage);
        } else {
            break;
        }
    }
    hit
}

/// `sup ||x̂_n - x*||_1 · n^q` over the last half of the logged stages of a
/// bandit run that converged to `eq`.
pub fn sampling_rate_check(record: &TrajectoryRecord, eq: &PureProfile, schedule: &Schedule) -> Result<f64> {
    let last = record.last().ok_or_else(|| Error::Analysis("empty trajectory record".into()))?;
    if !in_neighborhood(&last.profile(), eq, DEFAULT_EPSILON) {
        return Err(Error::Analysis("trajectory does not end near the given profile".into()));
    }
    let half = record.entries.len() / 2;
    record.entries[half..].iter().try_fold(0.0f64, |sup, e| {
        let sampling = e
            .sampling
            .as_ref()
            .ok_or_else(|| Error::Analysis(format!("sampling strategies not logged at stage {}", e.stage)))?;
        let d = MixedProfile(sampling.clone()).l1_distance_to_pure(eq);
        Ok(sup.max(d * (e.stage as f64).powf(schedule.q())))
    })
}

/// Histogram of `(x_{1,a_1}, x_{2,b_1})` over a batch of 2x2 runs at one
/// stage. `counts[row][col]` counts runs whose `x_{2,b_1}` falls in bin
/// `row` and `x_{1,a_1}` in bin `col`; bins split `[0, 1]` evenly, the last
/// one closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heatmap {
    pub bins: usize,
    pub stage: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<f64>,
    pub counts: Vec<Vec<u64>>,
}

impl Heatmap {
    pub fn empty(bins: usize, stage: u64) -> Self {
        Self { bins, stage, ell: None, counts: vec![vec![0; bins]; bins] }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn bin_of(&self, p: f64) -> usize {
        ((p * self.bins as f64).floor().max(0.0) as usize).min(self.bins - 1)
    }

    /// Counts in the bin containing the point `(x_{1,a_1}, x_{2,b_1})`.
    pub fn count_at(&self, x1: f64, x2: f64) -> u64 {
        self.counts[self.bin_of(x2)][self.bin_of(x1)]
    }

    /// Adds another grid over the same bins and stage.
    pub fn merge(&mut self, other: &Heatmap) -> Result<()> {
        if other.bins != self.bins || other.stage != self.stage {
            return Err(Error::Analysis("cannot merge heat maps with different bins or stages".into()));
        }
        for (row, orow) in self.counts.iter_mut().zip(&other.counts) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += o;
            }
        }
        Ok(())
    }
}

pub fn heatmap(records: &[TrajectoryRecord], stage: u64, bins: usize) -> Result<Heatmap> {
    if bins == 0 {
        return Err(Error::Analysis("bins must be >= 1".into()));
    }
    let mut map = Heatmap::empty(bins, stage);
    for record in records {
        let entry = record
            .entry_at(stage)
            .ok_or_else(|| Error::Analysis(format!("stage {stage} not logged for seed {}", record.seed)))?;
        let x = &entry.strategies;
        if x.len() != 2 || x.iter().any(|xi| xi.len() != 2) {
            return Err(Error::Analysis("heat maps need a 2x2 game".into()));
        }
        let (row, col) = (map.bin_of(x[1][0]), map.bin_of(x[0][0]));
        map.counts[row][col] += 1;
    }
    Ok(map)
}

/// Fraction of runs whose profile at `stage` lies in the `ε`-neighborhood
/// of some strict equilibrium.
pub fn convergence_fraction(records: &[TrajectoryRecord], game: &Game, stage: u64, epsilon: f64) -> Result<f64> {
    let equilibria = game.enumerate_strict_nash()?;
    let mut inside = 0usize;
    for record in records {
        let entry = record
            .entry_at(stage)
            .ok_or_else(|| Error::Analysis(format!("stage {stage} not logged for seed {}", record.seed)))?;
        let x = entry.profile();
        if equilibria.iter().any(|eq| in_neighborhood(&x, eq, epsilon)) {
            inside += 1;
        }
    }
    Ok(inside as f64 / records.len().max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::StageEntry;
    use crate::game::library::{coordination, near_tie};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn record(strategies: Vec<(u64, Vec<Vec<f64>>)>) -> TrajectoryRecord {
        TrajectoryRecord {
            config_hash: "test".into(),
            seed: 0,
            horizon: strategies.last().map_or(0, |s| s.0),
            entries: strategies
                .into_iter()
                .map(|(stage, strategies)| StageEntry {
                    stage,
                    strategies,
                    scores: None,
                    sampling: None,
                    actions: None,
                    payoffs: None,
                })
                .collect(),
        }
    }

    fn eq(a: &[usize]) -> PureProfile {
        PureProfile::new(a.to_vec())
    }

    /// 2x2 profile at l1 distance `d` from (a1, b1), all of it on player 1.
    fn at_distance(d: f64) -> Vec<Vec<f64>> {
        vec![vec![1.0 - d / 2.0, d / 2.0], vec![1.0, 0.0]]
    }

    #[test]
    fn neighborhood_examples() {
        let g = coordination();
        let target = eq(&[0, 0]);
        assert!(in_neighborhood(&MixedProfile::pure(&g, &target).unwrap(), &target, 0.01));
        let x = MixedProfile(vec![vec![0.96, 0.04], vec![0.97, 0.03]]);
        assert!(in_neighborhood(&x, &target, 0.05));
        let x = MixedProfile(vec![vec![0.96, 0.04], vec![0.94, 0.06]]);
        assert!(!in_neighborhood(&x, &target, 0.05));
    }

    #[test]
    fn normal_cone_examples() {
        let g = coordination();
        let target = eq(&[0, 0]);
        let v = g.payoff_vectors(&MixedProfile::pure(&g, &target).unwrap()).unwrap();
        assert!(normal_cone_contains(&g, &target, &v).unwrap());
        assert!(!normal_cone_contains(&g, &target, &[vec![1.0, 1.5], vec![2.0, 0.0]]).unwrap());
        assert!(normal_cone_contains(&g, &target, &[vec![3.0, 3.0], vec![-1.0, -1.0]]).unwrap());
        assert!(normal_cone_contains(&g, &target, &[vec![3.0, 3.0, 1.0], vec![-1.0, -1.0]]).is_err());
    }

    #[test]
    fn ball_examples() {
        let g = coordination();
        let target = eq(&[0, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let check = ball_in_cone_check(&g, &target, 1.35, 1000, &mut rng).unwrap();
        assert!(check.contained);
        assert_eq!(check.sampled_outside, 0);
        let check = ball_in_cone_check(&g, &target, 1.36, 1000, &mut rng).unwrap();
        assert!(!check.contained);
        assert!(check.sampled_outside > 0);
        assert!(ball_in_cone_check(&g, &target, 0.0, 10, &mut rng).unwrap().contained);
        assert!(matches!(
            ball_in_cone_check(&g, &eq(&[0, 1]), 0.1, 10, &mut rng),
            Err(Error::NotStrict { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let g = near_tie();
        let frozen = record((1..=100).map(|n| (n, vec![vec![0.7, 0.3], vec![0.4, 0.6]])).collect());
        let v = classify_trajectory(&frozen, &g, 0.01, 10).unwrap();
        assert_eq!(v.target, None);
        assert_eq!(v.entered_at, None);
        assert_eq!(v.nearest_profile, eq(&[0, 1]));
        assert!((v.final_distance - 1.4).abs() < 1e-12);

        let at_eq = record((1..=20).map(|n| (n, vec![vec![1.0, 0.0], vec![0.0, 1.0]])).collect());
        let v = classify_trajectory(&at_eq, &g, 0.01, 5).unwrap();
        assert_eq!(v.target, Some(eq(&[0, 1])));
        assert_eq!(v.entered_at, Some(1));
        assert_eq!(v.final_distance, 0.0);

        assert!(classify_trajectory(&at_eq, &g, 0.0, 5).is_err());
        assert!(classify_trajectory(&at_eq, &g, 0.01, 0).is_err());
        assert!(classify_trajectory(&record(vec![]), &g, 0.01, 5).is_err());
    }

    #[test]
    fn classify_requires_dwelling() {
        let g = coordination();
        // enters at 5, leaves at 8, re-enters at 12
        let rec = record(
            (1..=20)
                .map(|n| {
                    let inside = (5..8).contains(&n) || n >= 12;
                    (n, if inside { at_distance(0.001) } else { at_distance(0.5) })
                })
                .collect(),
        );
        let v = classify_trajectory(&rec, &g, 0.01, 5).unwrap();
        assert_eq!(v.target, Some(eq(&[0, 0])));
        assert_eq!(v.entered_at, Some(12));
        let v = classify_trajectory(&rec, &g, 0.01, 10).unwrap();
        assert_eq!(v.target, None);
    }

    #[test]
    fn rate_fit_on_synthetic_decay() {
        let s = Schedule::new(1.0, 0.5, 1.0, 0.0).unwrap();
        let rec = record((1..=400).map(|n| (n, at_distance((-(n as f64).sqrt()).exp()))).collect());
        let fit = fit_rate(&rec, &eq(&[0, 0]), &Regularizer::Entropic, &s).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-6, "{fit:?}");
        assert!(fit.intercept.abs() < 1e-4);
        assert!(fit.r_squared > 1.0 - 1e-9);
        assert!(fit.conforming);
    }

    #[test]
    fn rate_fit_flags_flat_distance() {
        let s = Schedule::new(1.0, 0.5, 1.0, 0.0).unwrap();
        let rec = record((1..=100).map(|n| (n, at_distance(1e-3))).collect());
        let fit = fit_rate(&rec, &eq(&[0, 0]), &Regularizer::Entropic, &s).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!(!fit.conforming);
    }

    #[test]
    fn rate_fit_preconditions() {
        let s = Schedule::new(1.0, 0.5, 1.0, 0.0).unwrap();
        let rec = record((1..=100).map(|n| (n, at_distance(1e-3))).collect());
        assert!(fit_rate(&rec, &eq(&[0, 0]), &Regularizer::Euclidean, &s).is_err());
        assert!(fit_rate(&rec, &eq(&[1, 1]), &Regularizer::Entropic, &s).is_err());
        let short = record((1..=5).map(|n| (n, at_distance(1e-3))).collect());
        assert!(fit_rate(&short, &eq(&[0, 0]), &Regularizer::Entropic, &s).is_err());
    }

    #[test]
    fn finite_time_examples() {
        let target = eq(&[0, 0]);
        let rec = record(vec![
            (1, at_distance(0.3)),
            (2, at_distance(0.0)),
            (3, at_distance(1e-20)),
            (4, at_distance(0.0)),
            (5, at_distance(0.0)),
        ]);
        assert_eq!(finite_time_check(&rec, &target), Some(4));
        let from_start = record((1..=3).map(|n| (n, at_distance(0.0))).collect());
        assert_eq!(finite_time_check(&from_start, &target), Some(1));
        let interior = record((1..=3).map(|n| (n, at_distance(1e-300))).collect());
        assert_eq!(finite_time_check(&interior, &target), None);
    }

    #[test]
    fn sampling_rate_on_exact_floor() {
        let s = Schedule::new(1.0, 0.75, 0.8, 0.25).unwrap();
        let k = 3.0;
        let mut rec = record(
            (1..=200)
                .map(|n| (n, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]))
                .collect(),
        );
        for e in &mut rec.entries {
            let eps = s.exploration(e.stage);
            let floor = eps / k;
            e.sampling = Some(vec![
                vec![1.0 - eps + floor, floor, floor],
                vec![floor, 1.0 - eps + floor, floor],
            ]);
        }
        let value = sampling_rate_check(&rec, &eq(&[0, 1]), &s).unwrap();
        let expected = 2.0 * (2.0 * 0.8 * (k - 1.0) / k);
        assert!((value - expected).abs() < 1e-12, "{value} vs {expected}");

        rec.entries[150].sampling = None;
        assert!(sampling_rate_check(&rec, &eq(&[0, 1]), &s).is_err());
        assert!(sampling_rate_check(&rec, &eq(&[1, 1]), &s).is_err());
    }

    #[test]
    fn heatmap_conserves_counts() {
        let frozen: Vec<TrajectoryRecord> = (0..7)
            .map(|_| record((1..=3).map(|n| (n, vec![vec![0.3, 0.7], vec![0.9, 0.1]])).collect()))
            .collect();
        let map = heatmap(&frozen, 2, 10).unwrap();
        assert_eq!(map.total(), 7);
        assert_eq!(map.count_at(0.3, 0.9), 7);
        assert_eq!(map.counts[9][3], 7);
        assert!(heatmap(&frozen, 4, 10).is_err());

        let mut merged = heatmap(&frozen[..3], 2, 10).unwrap();
        merged.merge(&heatmap(&frozen[3..], 2, 10).unwrap()).unwrap();
        assert_eq!(merged, map);
        assert!(merged.merge(&Heatmap::empty(5, 2)).is_err());

        let corners = record(vec![(1, vec![vec![1.0, 0.0], vec![0.0, 1.0]])]);
        let map = heatmap(&[corners], 1, 4).unwrap();
        assert_eq!(map.counts[0][3], 1);
    }
}

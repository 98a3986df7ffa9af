//! Finite normal-form games.
//!
//! Payoffs are stored densely, one flat row-major tensor per player, indexed
//! by pure action profiles `(a_1, ..., a_N)` with the last player's action
//! varying fastest.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::quantize::QuantizationScheme;

/// Upper bound on the number of pure profiles scanned by
/// [`Game::enumerate_strict_nash`].
pub const MAX_ENUMERATED_PROFILES: u128 = 10_000_000;

/// Tolerance on the sum of each mixed strategy.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameSpec", into = "GameSpec")]
pub struct Game {
    actions: Vec<Vec<String>>,
    payoffs: Vec<Vec<f64>>,
    strides: Vec<usize>,
    num_profiles: usize,
}

/// Wire form: `{"actions": [[...], ...], "payoffs": [nested, ...]}` where
/// `payoffs[i]` is nested `[a_1][a_2]...[a_N]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpec {
    pub actions: Vec<Vec<String>>,
    pub payoffs: Vec<Value>,
}

/// A pure action profile: one action index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PureProfile(pub Vec<usize>);

/// A mixed strategy profile: one probability vector per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixedProfile(pub Vec<Vec<f64>>);

impl PureProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        Self(actions)
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }
}

impl MixedProfile {
    /// Builds a profile and checks that every strategy lies on its simplex.
    pub fn new(strategies: Vec<Vec<f64>>) -> Result<Self> {
        for (i, x) in strategies.iter().enumerate() {
            check_simplex(x).map_err(|msg| Error::InvalidProfile(format!("player {i}: {msg}")))?;
        }
        Ok(Self(strategies))
    }

    /// Point mass on a pure profile.
    pub fn pure(game: &Game, profile: &PureProfile) -> Result<Self> {
        game.check_pure(profile)?;
        Ok(Self(
            profile
                .0
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    let mut x = vec![0.0; game.num_actions(i)];
                    x[a] = 1.0;
                    x
                })
                .collect(),
        ))
    }

    pub fn uniform(game: &Game) -> Self {
        Self(
            (0..game.num_players())
                .map(|i| {
                    let k = game.num_actions(i);
                    vec![1.0 / k as f64; k]
                })
                .collect(),
        )
    }

    pub fn player(&self, i: usize) -> &[f64] {
        &self.0[i]
    }

    pub fn strategies(&self) -> &[Vec<f64>] {
        &self.0
    }

    pub fn num_players(&self) -> usize {
        self.0.len()
    }

    /// Sum over players of the l1 distance to the point mass on `profile`.
    pub fn l1_distance_to_pure(&self, profile: &PureProfile) -> f64 {
        self.0
            .iter()
            .zip(&profile.0)
            .map(|(x, &star)| {
                x.iter()
                    .enumerate()
                    .map(|(a, &p)| if a == star { (1.0 - p).abs() } else { p.abs() })
                    .sum::<f64>()
            })
            .sum()
    }
}

pub(crate) fn check_simplex(x: &[f64]) -> std::result::Result<(), String> {
    if x.is_empty() {
        return Err("empty strategy".into());
    }
    if let Some(p) = x.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(format!("entry {p} is not a finite nonnegative probability"));
    }
    let sum: f64 = x.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(format!("entries sum to {sum}"));
    }
    Ok(())
}

impl Game {
    /// Builds a game from action labels and flat row-major payoff tensors.
    pub fn new(actions: Vec<Vec<String>>, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidGame("a game needs at least one player".into()));
        }
        if let Some(i) = actions.iter().position(|a| a.is_empty()) {
            return Err(Error::InvalidGame(format!("player {i} has no actions")));
        }
        if payoffs.len() != actions.len() {
            return Err(Error::InvalidGame(format!(
                "{} players but {} payoff tensors",
                actions.len(),
                payoffs.len()
            )));
        }
        let mut num_profiles: usize = 1;
        for a in &actions {
            num_profiles = num_profiles
                .checked_mul(a.len())
                .ok_or_else(|| Error::InvalidGame("profile space overflows usize".into()))?;
        }
        for (i, u) in payoffs.iter().enumerate() {
            if u.len() != num_profiles {
                return Err(Error::InvalidGame(format!(
                    "player {i} payoff tensor has {} entries, expected {num_profiles}",
                    u.len()
                )));
            }
            if let Some(v) = u.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidGame(format!("player {i} has non-finite payoff {v}")));
            }
        }
        let mut strides = vec![1; actions.len()];
        for i in (0..actions.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * actions[i + 1].len();
        }
        Ok(Self { actions, payoffs, strides, num_profiles })
    }

    /// Two-player game from row-major payoff matrices `[row][col]`.
    pub fn bimatrix(
        row_actions: &[&str],
        col_actions: &[&str],
        row_payoffs: &[&[f64]],
        col_payoffs: &[&[f64]],
    ) -> Result<Self> {
        let flatten = |m: &[&[f64]]| -> Vec<f64> { m.iter().flat_map(|r| r.iter().copied()).collect() };
        Self::new(
            vec![
                row_actions.iter().map(|s| s.to_string()).collect(),
                col_actions.iter().map(|s| s.to_string()).collect(),
            ],
            vec![flatten(row_payoffs), flatten(col_payoffs)],
        )
    }

    /// Two-player common-interest game: both players receive `payoffs[row][col]`.
    pub fn common_interest(row_actions: &[&str], col_actions: &[&str], payoffs: &[&[f64]]) -> Result<Self> {
        Self::bimatrix(row_actions, col_actions, payoffs, payoffs)
    }

    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    pub fn num_actions(&self, player: usize) -> usize {
        self.actions[player].len()
    }

    pub fn action_labels(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn num_profiles(&self) -> usize {
        self.num_profiles
    }

    /// Flat payoff tensor of one player.
    pub fn payoff_tensor(&self, player: usize) -> &[f64] {
        &self.payoffs[player]
    }

    /// Label form of a pure profile, e.g. `(a1,b2)`.
    pub fn profile_label(&self, profile: &PureProfile) -> String {
        let names: Vec<&str> = profile
            .0
            .iter()
            .enumerate()
            .map(|(i, &a)| self.actions[i][a].as_str())
            .collect();
        format!("({})", names.join(","))
    }

    /// Parses a profile from action labels, one per player.
    pub fn profile_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<PureProfile> {
        if labels.len() != self.num_players() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} players",
                labels.len(),
                self.num_players()
            )));
        }
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                self.actions[i]
                    .iter()
                    .position(|a| a == l.as_ref())
                    .ok_or_else(|| Error::InvalidGame(format!("player {i} has no action {:?}", l.as_ref())))
            })
            .collect::<Result<Vec<_>>>()
            .map(PureProfile)
    }

    fn flat_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    fn unflatten(&self, mut index: usize, out: &mut [usize]) {
        for (i, s) in self.strides.iter().enumerate() {
            out[i] = index / s;
            index %= s;
        }
    }

    pub fn check_pure(&self, profile: &PureProfile) -> Result<()> {
        if profile.0.len() != self.num_players() {
            return Err(Error::DimensionMismatch(format!(
                "pure profile has {} entries for {} players",
                profile.0.len(),
                self.num_players()
            )));
        }
        for (i, &a) in profile.0.iter().enumerate() {
            if a >= self.num_actions(i) {
                return Err(Error::DimensionMismatch(format!(
                    "player {i} action {a} out of range 0..{}",
                    self.num_actions(i)
                )));
            }
        }
        Ok(())
    }

    pub fn check_mixed(&self, x: &MixedProfile) -> Result<()> {
        if x.0.len() != self.num_players() {
            return Err(Error::DimensionMismatch(format!(
                "mixed profile has {} strategies for {} players",
                x.0.len(),
                self.num_players()
            )));
        }
        for (i, xi) in x.0.iter().enumerate() {
            if xi.len() != self.num_actions(i) {
                return Err(Error::DimensionMismatch(format!(
                    "player {i} strategy has {} entries, expected {}",
                    xi.len(),
                    self.num_actions(i)
                )));
            }
        }
        Ok(())
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.num_players() {
            return Err(Error::DimensionMismatch(format!(
                "player {player} out of range 0..{}",
                self.num_players()
            )));
        }
        Ok(())
    }

    /// `u_i(a)` for a pure profile.
    pub fn pure_payoff(&self, player: usize, profile: &PureProfile) -> Result<f64> {
        self.check_player(player)?;
        self.check_pure(profile)?;
        Ok(self.payoffs[player][self.flat_index(&profile.0)])
    }

    /// Payoffs of every player at a pure profile.
    pub(crate) fn pure_payoffs_unchecked(&self, profile: &[usize]) -> impl Iterator<Item = f64> + '_ {
        let idx = self.flat_index(profile);
        self.payoffs.iter().map(move |u| u[idx])
    }

    /// Expected payoff `u_i(x)` by full enumeration of the profile space.
    pub fn mixed_payoff(&self, x: &MixedProfile, player: usize) -> Result<f64> {
        self.check_player(player)?;
        self.check_mixed(x)?;
        let u = &self.payoffs[player];
        let mut profile = vec![0; self.num_players()];
        let mut total = 0.0;
        for (idx, &value) in u.iter().enumerate() {
            self.unflatten(idx, &mut profile);
            let weight: f64 = profile.iter().enumerate().map(|(j, &a)| x.0[j][a]).product();
            total += value * weight;
        }
        Ok(total)
    }

    /// Mixed payoff vector `v_i(x)`: entry `α` is `u_i(α; x_{-i})`.
    pub fn payoff_vector(&self, x: &MixedProfile, player: usize) -> Result<Vec<f64>> {
        self.check_player(player)?;
        self.check_mixed(x)?;
        Ok(self.payoff_vector_unchecked(x, player))
    }

    pub(crate) fn payoff_vector_unchecked(&self, x: &MixedProfile, player: usize) -> Vec<f64> {
        let u = &self.payoffs[player];
        let mut v = vec![0.0; self.num_actions(player)];
        let mut profile = vec![0; self.num_players()];
        for (idx, &value) in u.iter().enumerate() {
            self.unflatten(idx, &mut profile);
            let weight: f64 = profile
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != player)
                .map(|(j, &a)| x.0[j][a])
                .product();
            v[profile[player]] += value * weight;
        }
        v
    }

    /// Payoff vectors of every player.
    pub fn payoff_vectors(&self, x: &MixedProfile) -> Result<Vec<Vec<f64>>> {
        self.check_mixed(x)?;
        Ok((0..self.num_players()).map(|i| self.payoff_vector_unchecked(x, i)).collect())
    }

    /// First unilateral deviation `(player, action)` that does not strictly
    /// lose payoff, if any.
    fn weak_deviation(&self, profile: &PureProfile) -> Option<(usize, usize)> {
        let mut deviated = profile.0.clone();
        for i in 0..self.num_players() {
            let base = self.payoffs[i][self.flat_index(&profile.0)];
            for alpha in 0..self.num_actions(i) {
                if alpha == profile.0[i] {
                    continue;
                }
                deviated[i] = alpha;
                let dev = self.payoffs[i][self.flat_index(&deviated)];
                deviated[i] = profile.0[i];
                // Ties count as violations.
                if !(base > dev) {
                    return Some((i, alpha));
                }
            }
        }
        None
    }

    /// True iff every unilateral deviation strictly lowers the deviator's payoff.
    pub fn is_strict_nash(&self, profile: &PureProfile) -> Result<bool> {
        self.check_pure(profile)?;
        Ok(self.weak_deviation(profile).is_none())
    }

    /// Every pure profile, last player's action varying fastest.
    pub fn profiles(&self) -> impl Iterator<Item = PureProfile> + '_ {
        let mut buf = vec![0; self.num_players()];
        (0..self.num_profiles).map(move |idx| {
            self.unflatten(idx, &mut buf);
            PureProfile(buf.clone())
        })
    }

    /// All strict Nash equilibria in lexicographic profile order.
    pub fn enumerate_strict_nash(&self) -> Result<Vec<PureProfile>> {
        check_enumerable(self.actions.iter().map(Vec::len))?;
        Ok(self.profiles().filter(|p| self.weak_deviation(p).is_none()).collect())
    }

    /// Minimum payoff loss over all unilateral deviations from a strict
    /// equilibrium.
    pub fn min_payoff_gap(&self, eq: &PureProfile) -> Result<f64> {
        self.check_pure(eq)?;
        if let Some((player, action)) = self.weak_deviation(eq) {
            return Err(Error::NotStrict { player, action });
        }
        let base_idx = self.flat_index(&eq.0);
        let mut deviated = eq.0.clone();
        let mut gap = f64::INFINITY;
        for i in 0..self.num_players() {
            for alpha in (0..self.num_actions(i)).filter(|&a| a != eq.0[i]) {
                deviated[i] = alpha;
                gap = gap.min(self.payoffs[i][base_idx] - self.payoffs[i][self.flat_index(&deviated)]);
            }
            deviated[i] = eq.0[i];
        }
        Ok(gap)
    }

    /// Entrywise quantization of every payoff tensor.
    pub fn quantize(&self, q: &QuantizationScheme) -> Game {
        let payoffs = self
            .payoffs
            .iter()
            .map(|u| u.iter().map(|&v| q.quantize_finite(v)).collect())
            .collect();
        Game { payoffs, ..self.clone() }
    }

    /// Parses the JSON wire form.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidGame(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("game serializes")
    }
}

/// Fails when the product of the action counts exceeds
/// [`MAX_ENUMERATED_PROFILES`].
pub fn check_enumerable(action_counts: impl IntoIterator<Item = usize>) -> Result<()> {
    let profiles = action_counts
        .into_iter()
        .fold(1u128, |acc, k| acc.saturating_mul(k as u128));
    if profiles > MAX_ENUMERATED_PROFILES {
        return Err(Error::ProfileSpaceTooLarge { profiles, limit: MAX_ENUMERATED_PROFILES });
    }
    Ok(())
}

/// Free-function form of [`Game::quantize`].
pub fn quantize_game(g: &Game, q: &QuantizationScheme) -> Game {
    g.quantize(q)
}

impl TryFrom<GameSpec> for Game {
    type Error = Error;

    fn try_from(spec: GameSpec) -> Result<Self> {
        let dims: Vec<usize> = spec.actions.iter().map(Vec::len).collect();
        let payoffs = spec
            .payoffs
            .iter()
            .enumerate()
            .map(|(i, tensor)| {
                let mut flat = Vec::new();
                flatten_tensor(tensor, &dims, &mut flat)
                    .map_err(|msg| Error::InvalidGame(format!("payoffs[{i}]: {msg}")))?;
                Ok(flat)
            })
            .collect::<Result<Vec<_>>>()?;
        Game::new(spec.actions, payoffs)
    }
}

fn flatten_tensor(value: &Value, dims: &[usize], out: &mut Vec<f64>) -> std::result::Result<(), String> {
    match dims.split_first() {
        None => match value.as_f64() {
            Some(v) => {
                out.push(v);
                Ok(())
            }
            None => Err(format!("expected a number, found {value}")),
        },
        Some((&len, rest)) => {
            let arr = value.as_array().ok_or_else(|| format!("expected an array of length {len}"))?;
            if arr.len() != len {
                return Err(format!("expected an array of length {len}, found length {}", arr.len()));
            }
            arr.iter().try_for_each(|v| flatten_tensor(v, rest, out))
        }
    }
}

fn nest_tensor(flat: &[f64], dims: &[usize]) -> Value {
    match dims.split_first() {
        None => Value::from(flat[0]),
        Some((&len, rest)) => {
            let chunk = flat.len() / len;
            Value::Array((0..len).map(|k| nest_tensor(&flat[k * chunk..(k + 1) * chunk], rest)).collect())
        }
    }
}

impl From<Game> for GameSpec {
    fn from(g: Game) -> Self {
        let dims: Vec<usize> = g.actions.iter().map(Vec::len).collect();
        let payoffs = g.payoffs.iter().map(|u| nest_tensor(u, &dims)).collect();
        GameSpec { actions: g.actions, payoffs }
    }
}

/// Games used throughout the examples and tests.
pub mod library {
    use super::Game;

    /// 2x2 symmetric coordination game with payoffs 5.1 on the diagonal and
    /// 2.4 off it; both diagonal profiles are strict equilibria.
    pub fn coordination() -> Game {
        Game::common_interest(&["a1", "a2"], &["b1", "b2"], &[&[5.1, 2.4], &[2.4, 5.1]]).unwrap()
    }

    /// Anti-coordination common-interest game with payoffs 99.1 / 100.9.
    pub fn near_tie() -> Game {
        Game::common_interest(&["a1", "a2"], &["b1", "b2"], &[&[99.1, 100.9], &[100.9, 99.1]]).unwrap()
    }

    /// Anti-coordination common-interest game with payoffs 0.04 / 0.8.
    pub fn small_payoffs() -> Game {
        Game::common_interest(&["a1", "a2"], &["b1", "b2"], &[&[0.04, 0.8], &[0.8, 0.04]]).unwrap()
    }

    pub fn matching_pennies() -> Game {
        Game::bimatrix(
            &["h", "t"],
            &["h", "t"],
            &[&[1.0, -1.0], &[-1.0, 1.0]],
            &[&[-1.0, 1.0], &[1.0, -1.0]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;
    use crate::quantize::{QuantizationScheme, Rule};

    fn mp(x: Vec<Vec<f64>>) -> MixedProfile {
        MixedProfile::new(x).unwrap()
    }

    #[test]
    fn mixed_payoff_examples() {
        let g = coordination();
        assert_eq!(g.mixed_payoff(&mp(vec![vec![1.0, 0.0], vec![1.0, 0.0]]), 0).unwrap(), 5.1);
        let half = mp(vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert!((g.mixed_payoff(&half, 0).unwrap() - 3.75).abs() < 1e-12);
        // point mass reproduces the tensor entry
        let p = PureProfile::new(vec![1, 0]);
        let x = MixedProfile::pure(&g, &p).unwrap();
        assert_eq!(g.mixed_payoff(&x, 1).unwrap(), g.pure_payoff(1, &p).unwrap());
    }

    #[test]
    fn payoff_vector_examples() {
        let g = near_tie();
        let x = mp(vec![vec![0.5, 0.5], vec![0.2, 0.8]]);
        let v = g.payoff_vector(&x, 0).unwrap();
        assert!((v[0] - 100.54).abs() < 1e-9 && (v[1] - 99.46).abs() < 1e-9, "{v:?}");

        let x = mp(vec![vec![0.5, 0.5], vec![1.0, 0.0]]);
        assert_eq!(g.payoff_vector(&x, 0).unwrap(), vec![99.1, 100.9]);

        let g = coordination();
        let v = g.payoff_vector(&mp(vec![vec![0.3, 0.7], vec![0.5, 0.5]]), 0).unwrap();
        assert!((v[0] - 3.75).abs() < 1e-12 && (v[1] - 3.75).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = coordination();
        let bad = MixedProfile(vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0]]);
        assert!(matches!(g.mixed_payoff(&bad, 0), Err(Error::DimensionMismatch(_))));
        assert!(matches!(g.payoff_vector(&MixedProfile(vec![vec![1.0, 0.0]]), 0), Err(Error::DimensionMismatch(_))));
        assert!(g.mixed_payoff(&MixedProfile::uniform(&g), 2).is_err());
    }

    #[test]
    fn strict_nash_examples() {
        let g = near_tie();
        assert!(g.is_strict_nash(&PureProfile::new(vec![0, 1])).unwrap());
        let g = coordination();
        assert!(g.is_strict_nash(&PureProfile::new(vec![0, 0])).unwrap());
        assert!(!g.is_strict_nash(&PureProfile::new(vec![0, 1])).unwrap());
        assert!(g.is_strict_nash(&PureProfile::new(vec![2, 0])).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            coordination().enumerate_strict_nash().unwrap(),
            vec![PureProfile::new(vec![0, 0]), PureProfile::new(vec![1, 1])]
        );
        assert!(matching_pennies().enumerate_strict_nash().unwrap().is_empty());
        assert_eq!(
            small_payoffs().enumerate_strict_nash().unwrap(),
            vec![PureProfile::new(vec![0, 1]), PureProfile::new(vec![1, 0])]
        );
    }

    #[test]
    fn ties_are_not_strict() {
        let g = Game::common_interest(&["a1", "a2"], &["b1", "b2"], &[&[1.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert!(!g.is_strict_nash(&PureProfile::new(vec![0, 0])).unwrap());
    }

    #[test]
    fn enumeration_guard_trips() {
        assert!(check_enumerable([10, 10, 10, 10, 10, 10, 10]).is_ok());
        assert!(matches!(check_enumerable([2; 24]), Err(Error::ProfileSpaceTooLarge { .. })));
        assert!(matches!(check_enumerable([usize::MAX; 8]), Err(Error::ProfileSpaceTooLarge { .. })));
    }

    #[test]
    fn min_gap_examples() {
        let g = coordination();
        assert!((g.min_payoff_gap(&PureProfile::new(vec![0, 0])).unwrap() - 2.7).abs() < 1e-12);
        let g = near_tie();
        assert!((g.min_payoff_gap(&PureProfile::new(vec![0, 1])).unwrap() - 1.8).abs() < 1e-12);
        let g = Game::bimatrix(&["a1", "a2"], &["b1", "b2"], &[&[4.0, 0.0], &[3.5, 0.0]], &[&[4.0, 0.0], &[0.0, 0.0]])
            .unwrap();
        assert_eq!(g.min_payoff_gap(&PureProfile::new(vec![0, 0])).unwrap(), 0.5);
    }

    #[test]
    fn min_gap_names_violating_player() {
        let g = coordination();
        match g.min_payoff_gap(&PureProfile::new(vec![0, 1])) {
            Err(Error::NotStrict { player, .. }) => assert_eq!(player, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quantized_games() {
        let q = QuantizationScheme::new(Rule::HalfAway, 1.0).unwrap();
        let g = small_payoffs().quantize(&q);
        assert_eq!(g.payoff_tensor(0), &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(g.payoff_tensor(1), &[0.0, 1.0, 1.0, 0.0]);

        let on_grid = Game::common_interest(&["a"], &["b", "c"], &[&[3.0, -2.0]]).unwrap();
        assert_eq!(on_grid.quantize(&q), on_grid);

        let q2 = QuantizationScheme::new(Rule::HalfAway, 2.0).unwrap();
        let g = quantize_game(&coordination(), &q2);
        assert_eq!(g.payoff_tensor(0), &[6.0, 2.0, 2.0, 6.0]);
    }

    #[test]
    fn json_round_trip_and_shape_errors() {
        let text = r#"{"actions": [["a1","a2"],["b1","b2"]],
                       "payoffs": [[[5.1, 2.4],[2.4, 5.1]], [[5.1, 2.4],[2.4, 5.1]]]}"#;
        let g = Game::from_json(text).unwrap();
        assert_eq!(g, coordination());
        assert_eq!(Game::from_json(&g.to_json()).unwrap(), g);

        let ragged = r#"{"actions": [["a1","a2"],["b1","b2"]], "payoffs": [[[1, 2],[3]], [[1, 2],[3, 4]]]}"#;
        assert!(Game::from_json(ragged).is_err());
        let extra = r#"{"actions": [["a"]], "payoffs": [[1]], "name": "x"}"#;
        assert!(Game::from_json(extra).is_err());
        let no_actions = r#"{"actions": [[]], "payoffs": [[]]}"#;
        assert!(Game::from_json(no_actions).is_err());
    }

    #[test]
    fn three_player_layout_is_row_major() {
        // u_0(a) = 100 a_0 + 10 a_1 + a_2
        let mut u = Vec::new();
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..2 {
                    u.push((100 * a + 10 * b + c) as f64);
                }
            }
        }
        let labels = |n: usize| (0..n).map(|k| k.to_string()).collect::<Vec<_>>();
        let g = Game::new(vec![labels(2), labels(3), labels(2)], vec![u.clone(), u.clone(), u]).unwrap();
        assert_eq!(g.pure_payoff(0, &PureProfile::new(vec![1, 2, 1])).unwrap(), 121.0);
        let json: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(json["payoffs"][0][1][2][1], 121.0);
    }
}

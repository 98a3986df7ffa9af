//! Decomposable regularizers `h(x) = Σ θ(x_α)` and their choice maps.
//!
//! The choice map sends a score vector `y` to the regularized best response
//! `argmax_{x ∈ Δ} ⟨y, x⟩ - h(x)`. For a decomposable kernel the optimality
//! conditions give `x_α = φ(y_α - λ)`, with `φ` the clamped inverse of `θ'`
//! (the rate function) and `λ` chosen so the entries sum to one. The two
//! built-in kernels use closed forms; user kernels go through bisection.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BISECTION_TOLERANCE: f64 = 1e-10;
const BISECTION_MAX_ITERS: usize = 200;

/// A user-supplied kernel `θ` on `[0, 1]`.
pub trait Kernel: Send + Sync {
    fn value(&self, z: f64) -> f64;
    /// `θ'(z)` on `(0, 1]`.
    fn derivative(&self, z: f64) -> f64;
    /// `θ'(0⁺)`; `-∞` for steep kernels.
    fn derivative_at_zero(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegularizerKind {
    Entropic,
    Euclidean,
}

#[derive(Clone)]
pub enum Regularizer {
    /// `θ(z) = z log z`; choice map is the softmax.
    Entropic,
    /// `θ(z) = z²/2`; choice map is Euclidean projection onto the simplex.
    Euclidean,
    Custom(Arc<dyn Kernel>),
}

impl fmt::Debug for Regularizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regularizer::Entropic => f.write_str("Entropic"),
            Regularizer::Euclidean => f.write_str("Euclidean"),
            Regularizer::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl From<RegularizerKind> for Regularizer {
    fn from(kind: RegularizerKind) -> Self {
        match kind {
            RegularizerKind::Entropic => Regularizer::Entropic,
            RegularizerKind::Euclidean => Regularizer::Euclidean,
        }
    }
}

impl Regularizer {
    pub fn kind(&self) -> Option<RegularizerKind> {
        match self {
            Regularizer::Entropic => Some(RegularizerKind::Entropic),
            Regularizer::Euclidean => Some(RegularizerKind::Euclidean),
            Regularizer::Custom(_) => None,
        }
    }

    pub fn kernel(&self, z: f64) -> f64 {
        match self {
            Regularizer::Entropic => {
                if z == 0.0 {
                    0.0
                } else {
                    z * z.ln()
                }
            }
            Regularizer::Euclidean => 0.5 * z * z,
            Regularizer::Custom(k) => k.value(z),
        }
    }

    pub fn kernel_derivative(&self, z: f64) -> f64 {
        match self {
            Regularizer::Entropic => 1.0 + z.ln(),
            Regularizer::Euclidean => z,
            Regularizer::Custom(k) => k.derivative(z),
        }
    }

    /// `θ'(0⁺)`.
    pub fn derivative_at_zero(&self) -> f64 {
        match self {
            Regularizer::Entropic => f64::NEG_INFINITY,
            Regularizer::Euclidean => 0.0,
            Regularizer::Custom(k) => k.derivative_at_zero(),
        }
    }

    /// Steep kernels (`θ'(0⁺) = -∞`) have interior-valued choice maps.
    pub fn is_steep(&self) -> bool {
        self.derivative_at_zero() == f64::NEG_INFINITY
    }

    /// Smallest finite-difference estimate of `θ''` over `points` interior
    /// grid points of `(0, 1]`.
    pub fn min_curvature(&self, points: usize) -> f64 {
        let h = 1e-6;
        (1..=points)
            .map(|k| {
                let z = (k as f64 / points as f64).min(1.0 - h);
                (self.kernel_derivative(z + h) - self.kernel_derivative(z - h)) / (2.0 * h)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Rate function `φ`: 0 below `θ'(0⁺)`, 1 above `θ'(1⁻)`, `(θ')⁻¹`
    /// in between.
    pub fn rate_function(&self, y: f64) -> f64 {
        match self {
            Regularizer::Entropic => {
                if y >= 1.0 {
                    1.0
                } else {
                    (y - 1.0).exp()
                }
            }
            Regularizer::Euclidean => {
                if y.is_nan() {
                    y
                } else {
                    y.clamp(0.0, 1.0)
                }
            }
            Regularizer::Custom(k) => {
                let lo_d = k.derivative_at_zero();
                let hi_d = k.derivative(1.0);
                if y <= lo_d {
                    return 0.0;
                }
                if y >= hi_d {
                    return 1.0;
                }
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                while hi - lo > BISECTION_TOLERANCE {
                    let mid = 0.5 * (lo + hi);
                    if mid <= 0.0 || k.derivative(mid) < y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    /// Regularized best response to `y`.
    pub fn choice_map(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; y.len()];
        self.choice_map_into(y, &mut out)?;
        Ok(out)
    }

    pub fn choice_map_into(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        if y.is_empty() {
            return Err(Error::InvalidRegularizerInput("empty score vector".into()));
        }
        if let Some(v) = y.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(*v));
        }
        if out.len() != y.len() {
            return Err(Error::DimensionMismatch(format!("output has {} slots for {} scores", out.len(), y.len())));
        }
        match self {
            Regularizer::Entropic => softmax_into(y, out),
            Regularizer::Euclidean => project_simplex_into(y, out),
            Regularizer::Custom(_) => self.bisect_choice_into(y, out),
        }
        Ok(())
    }

    fn bisect_choice_into(&self, y: &[f64], out: &mut [f64]) {
        let total = |lambda: f64| y.iter().map(|&v| self.rate_function(v - lambda)).sum::<f64>();
        let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // total(λ) is nonincreasing in λ; expand a bracket [lo, hi] with
        // total(lo) >= 1 >= total(hi).
        let mut width = 1.0;
        let mut hi = max;
        while total(hi) > 1.0 {
            hi += width;
            width *= 2.0;
        }
        let mut lo = hi - 1.0;
        width = 1.0;
        while total(lo) < 1.0 {
            lo -= width;
            width *= 2.0;
        }
        for _ in 0..BISECTION_MAX_ITERS {
            if hi - lo <= BISECTION_TOLERANCE * hi.abs().max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if total(mid) >= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        for (o, &v) in out.iter_mut().zip(y) {
            *o = self.rate_function(v - lambda);
        }
        let sum: f64 = out.iter().sum();
        out.iter_mut().for_each(|o| *o /= sum);
    }

    /// A score vector whose choice map is `x`.
    pub fn initial_scores_for(&self, x: &[f64]) -> Result<Vec<f64>> {
        crate::game::check_simplex(x).map_err(Error::InvalidRegularizerInput)?;
        match self {
            Regularizer::Entropic => {
                if x.iter().any(|&p| p <= 0.0) {
                    return Err(Error::InvalidRegularizerInput(
                        "entropic choice map is interior-valued; strategy must be strictly positive".into(),
                    ));
                }
                Ok(x.iter().map(|p| p.ln()).collect())
            }
            Regularizer::Euclidean => Ok(x.to_vec()),
            Regularizer::Custom(k) => x
                .iter()
                .map(|&p| {
                    let d = if p == 0.0 { k.derivative_at_zero() } else { k.derivative(p) };
                    if d.is_finite() {
                        Ok(d)
                    } else {
                        Err(Error::InvalidRegularizerInput(format!("kernel derivative is not finite at {p}")))
                    }
                })
                .collect(),
        }
    }
}

/// Softmax with a max shift.
pub fn softmax_into(y: &[f64], out: &mut [f64]) {
    let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &v) in out.iter_mut().zip(y) {
        *o = (v - max).exp();
        sum += *o;
    }
    out.iter_mut().for_each(|o| *o /= sum);
}

/// Euclidean projection onto the probability simplex by sorting and
/// thresholding. A single-coordinate support is returned as an exact vertex.
pub fn project_simplex_into(y: &[f64], out: &mut [f64]) {
    let mut sorted = y.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut support = 0;
    let mut threshold = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            support = k + 1;
            threshold = t;
        }
    }
    if support == 1 {
        let top = y
            .iter()
            .enumerate()
            .fold(0, |best, (k, &v)| if v > y[best] { k } else { best });
        out.iter_mut().for_each(|o| *o = 0.0);
        out[top] = 1.0;
        return;
    }
    for (o, &v) in out.iter_mut().zip(y) {
        *o = (v - threshold).max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `θ(z) = z²` (twice the Euclidean kernel), used to exercise the
    /// bisection path against a closed form.
    struct Quadratic;

    impl Kernel for Quadratic {
        fn value(&self, z: f64) -> f64 {
            z * z
        }
        fn derivative(&self, z: f64) -> f64 {
            2.0 * z
        }
        fn derivative_at_zero(&self) -> f64 {
            0.0
        }
    }

    /// Brute-force maximizer of `⟨y, x⟩ - h(x)` over a simplex grid.
    fn grid_argmax(r: &Regularizer, y: &[f64], step: f64) -> Vec<f64> {
        let n = (1.0 / step).round() as usize;
        let objective = |x: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b - r.kernel(*a)).sum() };
        let mut best = (f64::NEG_INFINITY, vec![]);
        match y.len() {
            2 => {
                for i in 0..=n {
                    let x = [i as f64 / n as f64, (n - i) as f64 / n as f64];
                    let val = objective(&x);
                    if val > best.0 {
                        best = (val, x.to_vec());
                    }
                }
            }
            3 => {
                for i in 0..=n {
                    for j in 0..=(n - i) {
                        let x = [i as f64 / n as f64, j as f64 / n as f64, (n - i - j) as f64 / n as f64];
                        let val = objective(&x);
                        if val > best.0 {
                            best = (val, x.to_vec());
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        best.1
    }

    #[test]
    fn choice_map_examples() {
        let x = Regularizer::Entropic.choice_map(&[0.0, 0.0, 0.0]).unwrap();
        x.iter().for_each(|p| assert!((p - 1.0 / 3.0).abs() < 1e-15));
        let x = Regularizer::Entropic.choice_map(&[0.6f64.ln(), 0.4f64.ln()]).unwrap();
        assert!((x[0] - 0.6).abs() < 1e-12 && (x[1] - 0.4).abs() < 1e-12);
        let x = Regularizer::Euclidean.choice_map(&[0.5, 0.1]).unwrap();
        assert!((x[0] - 0.7).abs() < 1e-12 && (x[1] - 0.3).abs() < 1e-12, "{x:?}");
    }

    #[test]
    fn steep_versus_non_steep() {
        assert_eq!(Regularizer::Euclidean.choice_map(&[10.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(Regularizer::Euclidean.choice_map(&[0.0, 3.0, -1.0]).unwrap(), vec![0.0, 1.0, 0.0]);
        let x = Regularizer::Entropic.choice_map(&[10.0, 0.0]).unwrap();
        assert!(x[1] > 0.0);
        assert!(Regularizer::Entropic.is_steep());
        assert!(!Regularizer::Euclidean.is_steep());
    }

    #[test]
    fn softmax_survives_large_scores() {
        let x = Regularizer::Entropic.choice_map(&[1e6, 1e6 - 1.0]).unwrap();
        assert!(x.iter().all(|p| p.is_finite()));
        assert!((x[0] - 1.0 / (1.0 + (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_scores() {
        assert!(Regularizer::Entropic.choice_map(&[]).is_err());
        assert!(matches!(Regularizer::Euclidean.choice_map(&[f64::NAN, 1.0]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn rate_function_examples() {
        assert_eq!(Regularizer::Entropic.rate_function(1.0), 1.0);
        assert!((Regularizer::Entropic.rate_function(-5.0) - (-6.0f64).exp()).abs() < 1e-18);
        assert_eq!(Regularizer::Entropic.rate_function(f64::NEG_INFINITY), 0.0);
        assert_eq!(Regularizer::Euclidean.rate_function(-0.2), 0.0);
        assert_eq!(Regularizer::Euclidean.rate_function(1.7), 1.0);
    }

    #[test]
    fn rate_function_inverts_derivative() {
        let custom = Regularizer::Custom(Arc::new(Quadratic));
        for r in [Regularizer::Entropic, Regularizer::Euclidean, custom] {
            for z in [0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0] {
                let back = r.rate_function(r.kernel_derivative(z));
                assert!((back - z).abs() < 1e-9, "{r:?} z={z} back={back}");
            }
            let mut prev = f64::NEG_INFINITY;
            for k in -400..=400 {
                let v = r.rate_function(k as f64 / 100.0);
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn built_in_kernels_are_strongly_convex() {
        assert!(Regularizer::Entropic.min_curvature(100) > 0.5);
        assert!(Regularizer::Euclidean.min_curvature(100) > 0.5);
    }

    #[test]
    fn initial_scores_examples() {
        let y = Regularizer::Entropic.initial_scores_for(&[0.8, 0.2]).unwrap();
        assert_eq!(y, vec![0.8f64.ln(), 0.2f64.ln()]);
        assert_eq!(Regularizer::Euclidean.initial_scores_for(&[0.6, 0.4]).unwrap(), vec![0.6, 0.4]);
        assert!(Regularizer::Entropic.initial_scores_for(&[1.0, 0.0]).is_err());
        assert!(Regularizer::Euclidean.initial_scores_for(&[0.6, 0.6]).is_err());
        for r in [Regularizer::Entropic, Regularizer::Euclidean] {
            let x = [0.15, 0.25, 0.6];
            let back = r.choice_map(&r.initial_scores_for(&x).unwrap()).unwrap();
            back.iter().zip(x).for_each(|(a, b)| assert!((a - b).abs() < 1e-9));
        }
    }

    #[test]
    fn custom_kernel_matches_closed_form() {
        // θ(z) = z² has choice map = projection of y/2.
        let custom = Regularizer::Custom(Arc::new(Quadratic));
        for y in [vec![0.3, -0.1, 0.9], vec![5.0, 0.0], vec![0.1, 0.2, 0.3, 0.4]] {
            let half: Vec<f64> = y.iter().map(|v| v / 2.0).collect();
            let expect = Regularizer::Euclidean.choice_map(&half).unwrap();
            let got = custom.choice_map(&y).unwrap();
            got.iter().zip(&expect).for_each(|(a, b)| assert!((a - b).abs() < 1e-8, "{got:?} {expect:?}"));
        }
    }

    #[test]
    fn grid_search_oracle() {
        let cases: [&[f64]; 6] = [&[0.3, -0.2], &[1.5, 1.0], &[-0.7, 2.1], &[0.1, 0.4, -0.3], &[1.0, 1.2, 0.9], &[2.0, -1.0, 0.5]];
        for r in [Regularizer::Entropic, Regularizer::Euclidean] {
            for y in cases {
                let oracle = grid_argmax(&r, y, 1e-3);
                let got = r.choice_map(y).unwrap();
                let err = got.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(err <= 2e-3, "{r:?} y={y:?} got={got:?} oracle={oracle:?}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn choice_map_is_feasible_and_shift_invariant(
            y in prop::collection::vec(-50.0f64..50.0, 2..=10),
            c in -100.0f64..100.0,
        ) {
            for r in [Regularizer::Entropic, Regularizer::Euclidean] {
                let x = r.choice_map(&y).unwrap();
                prop_assert!(x.iter().all(|&p| p >= 0.0));
                prop_assert!((x.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
                let shifted: Vec<f64> = y.iter().map(|v| v + c).collect();
                let xs = r.choice_map(&shifted).unwrap();
                for (a, b) in x.iter().zip(&xs) {
                    prop_assert!((a - b).abs() <= 1e-9);
                }
            }
            let e = Regularizer::Entropic.choice_map(&y.iter().map(|v| v / 10.0).collect::<Vec<_>>()).unwrap();
            prop_assert!(e.iter().all(|&p| p > 0.0));
        }
    }
}

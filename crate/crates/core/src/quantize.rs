//! Grid quantization operators.
//!
//! A scheme is parameterized by its quantization error `ℓ`: every rule maps
//! `v` to a zero-aligned grid and guarantees `|Q(v) - v| <= ℓ/2`. The grid
//! spacing is derived from `ℓ` per rule; for the rounding rules it is `ℓ`
//! itself, for `floor` it is `ℓ/2` (flooring onto a grid of spacing `s` has
//! worst-case error `s`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to snap `v / spacing` onto an integer before
/// rounding. Quotients of grid points are within one ulp of their integer.
const SNAP_ULPS: f64 = 2.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `s * floor(v / s)` with `s = ℓ/2`.
    Floor,
    /// `ℓ * sgn(v) * floor(|v|/ℓ + 1/2)`.
    HalfAway,
    /// Nearest multiple of `ℓ` (the even integers for the `ℓ = 2` preset),
    /// ties away from zero.
    EvenAway,
    /// No quantization; only legal with `ℓ = 0`.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScheme", into = "RawScheme")]
pub struct QuantizationScheme {
    rule: Rule,
    error: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    rule: Rule,
    error: f64,
}

impl TryFrom<RawScheme> for QuantizationScheme {
    type Error = Error;

    fn try_from(raw: RawScheme) -> Result<Self> {
        Self::new(raw.rule, raw.error)
    }
}

impl From<QuantizationScheme> for RawScheme {
    fn from(q: QuantizationScheme) -> Self {
        RawScheme { rule: q.rule, error: q.error }
    }
}

impl Default for QuantizationScheme {
    fn default() -> Self {
        Self::identity()
    }
}

impl QuantizationScheme {
    /// Builds a scheme from its rule and quantization error `ℓ`.
    ///
    /// `ℓ = 0` means no quantization and always yields the identity scheme,
    /// whatever rule was named.
    pub fn new(rule: Rule, error: f64) -> Result<Self> {
        if !error.is_finite() || error < 0.0 {
            return Err(Error::InvalidQuantizer(format!("quantization error must be finite and >= 0, got {error}")));
        }
        if error == 0.0 {
            return Ok(Self::identity());
        }
        if rule == Rule::Identity {
            return Err(Error::InvalidQuantizer(format!("identity rule requires error 0, got {error}")));
        }
        Ok(Self { rule, error })
    }

    pub fn identity() -> Self {
        Self { rule: Rule::Identity, error: 0.0 }
    }

    /// Round half away from zero onto the integers, scaled by `multiplier`.
    pub fn half_away(multiplier: f64) -> Result<Self> {
        Self::new(Rule::HalfAway, multiplier)
    }

    /// Round to the closest even integer (ties away from zero), scaled by
    /// `multiplier`.
    pub fn even_away(multiplier: f64) -> Result<Self> {
        Self::new(Rule::EvenAway, 2.0 * multiplier)
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// The quantization error `ℓ`.
    pub fn error(&self) -> f64 {
        self.error
    }

    pub fn is_identity(&self) -> bool {
        self.rule == Rule::Identity
    }

    /// Spacing of the grid the rule maps onto (0 for identity).
    pub fn grid_spacing(&self) -> f64 {
        match self.rule {
            Rule::Identity => 0.0,
            Rule::HalfAway | Rule::EvenAway => self.error,
            Rule::Floor => self.error / 2.0,
        }
    }

    pub fn quantize(&self, v: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::NonFinite(v));
        }
        Ok(self.quantize_finite(v))
    }

    pub(crate) fn quantize_finite(&self, v: f64) -> f64 {
        let s = self.grid_spacing();
        match self.rule {
            Rule::Identity => v,
            Rule::HalfAway | Rule::EvenAway => {
                let k = (snap(v.abs() / s) + 0.5).floor();
                v.signum() * s * k
            }
            Rule::Floor => s * snap(v / s).floor(),
        }
    }

    /// Componentwise quantization.
    pub fn quantize_vector(&self, v: &[f64]) -> Result<Vec<f64>> {
        v.iter().map(|&x| self.quantize(x)).collect()
    }
}

fn snap(t: f64) -> f64 {
    let r = t.round();
    if (t - r).abs() <= SNAP_ULPS * r.abs().max(1.0) {
        r
    } else {
        t
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack on the strict inequalities of the summability check, so that grid
/// values on the boundary (e.g. `p + q` summing to 1 up to rounding) are not
/// flagged valid by floating-point noise.
const VALIDITY_SLACK: f64 = 1e-12;

/// Polynomial step-size and exploration schedule:
/// `γ_n = g0 · n^(-p)`, `ε_n = e0 · n^(-q)` for `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchedule", into = "RawSchedule")]
pub struct Schedule {
    g0: f64,
    p: f64,
    e0: f64,
    q: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    #[serde(default = "one")]
    g0: f64,
    p: f64,
    #[serde(default = "one")]
    e0: f64,
    #[serde(default)]
    q: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawSchedule> for Schedule {
    type Error = Error;

    fn try_from(raw: RawSchedule) -> Result<Self> {
        Schedule::new(raw.g0, raw.p, raw.e0, raw.q)
    }
}

impl From<Schedule> for RawSchedule {
    fn from(s: Schedule) -> Self {
        RawSchedule { g0: s.g0, p: s.p, e0: s.e0, q: s.q }
    }
}

/// Which of the three summability conditions a schedule meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScheduleValidity {
    /// `p <= 1`: the step sizes are not summable.
    pub step_not_summable: bool,
    /// `p + q > 1`: `Σ γ_n ε_n < ∞`.
    pub bias_summable: bool,
    /// `2p - 2q > 1`: `Σ γ_n² / ε_n² < ∞`.
    pub variance_summable: bool,
}

impl ScheduleValidity {
    pub fn is_valid(&self) -> bool {
        self.step_not_summable && self.bias_summable && self.variance_summable
    }
}

impl Schedule {
    pub fn new(g0: f64, p: f64, e0: f64, q: f64) -> Result<Self> {
        if !(g0.is_finite() && g0 > 0.0) {
            return Err(Error::InvalidSchedule(format!("step coefficient g0 must be > 0, got {g0}")));
        }
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::InvalidSchedule(format!("step exponent p must be >= 0, got {p}")));
        }
        if !(e0 > 0.0 && e0 <= 1.0) {
            return Err(Error::InvalidSchedule(format!("exploration coefficient e0 must lie in (0, 1], got {e0}")));
        }
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::InvalidSchedule(format!("exploration exponent q must be >= 0, got {q}")));
        }
        Ok(Self { g0, p, e0, q })
    }

    /// Constant step `γ_n = g0` with full exploration.
    pub fn constant(g0: f64) -> Result<Self> {
        Self::new(g0, 0.0, 1.0, 0.0)
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn e0(&self) -> f64 {
        self.e0
    }
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `γ_n`; stages are numbered from 1.
    pub fn step(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        self.g0 * (n as f64).powf(-self.p)
    }

    /// `ε_n`, always in `(0, 1]`.
    pub fn exploration(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        self.e0 * (n as f64).powf(-self.q)
    }

    pub fn validity(&self) -> ScheduleValidity {
        ScheduleValidity {
            step_not_summable: self.p <= 1.0 + VALIDITY_SLACK,
            bias_summable: self.p + self.q > 1.0 + VALIDITY_SLACK,
            variance_summable: 2.0 * self.p - 2.0 * self.q > 1.0 + VALIDITY_SLACK,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validity().is_valid()
    }

    /// Human-readable reason when the schedule fails the summability check.
    pub fn validity_warning(&self) -> Option<String> {
        let v = self.validity();
        if v.is_valid() {
            return None;
        }
        let mut failed = Vec::new();
        if !v.step_not_summable {
            failed.push(format!("p <= 1 (p = {})", self.p));
        }
        if !v.bias_summable {
            failed.push(format!("p + q > 1 (p + q = {})", self.p + self.q));
        }
        if !v.variance_summable {
            failed.push(format!("2p - 2q > 1 (2p - 2q = {})", 2.0 * self.p - 2.0 * self.q));
        }
        Some(format!(
            "schedule (p = {}, q = {}) violates {}; convergence guarantees do not apply",
            self.p,
            self.q,
            failed.join(", ")
        ))
    }
}

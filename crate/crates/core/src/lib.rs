//! Learning in finite games with quantized payoff feedback.
//!
//! The crate simulates follow-the-regularized-leader dynamics whose payoff
//! observations pass through a grid quantizer, optionally with additive
//! noise and bandit (importance-weighted) estimation, and provides the
//! analysis needed to tell convergent runs from frozen or scattered ones.

pub mod analysis;
pub mod batch;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod quantize;
pub mod regularizer;

pub use error::{Error, Result};
pub use game::{Game, MixedProfile, PureProfile};
pub use quantize::{QuantizationScheme, Rule};
pub use regularizer::{Regularizer, RegularizerKind};

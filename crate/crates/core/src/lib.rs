//! Safety test thresholds that depend on how many measurements were taken.
//!
//! A standard that says "take `n` measurements and declare the design safe if
//! none exceeds `q0`" has two problems. With exactly `n` measurements a designer
//! who does the minimum gets a `1/(n+1)` chance that the next value exceeds the
//! danger level. With more than `n` measurements the same fixed test threshold
//! rejects perfectly safe designs more and more often. This crate computes a
//! stricter test threshold calibrated against a tolerated exceedance probability
//! `p0`, extends it to a schedule `t(n')` over larger measurement counts, and
//! ships seeded Monte Carlo harnesses that reproduce both effects.
//!
//! Modules:
//! - [`gaussian`]: standard-normal primitives, adaptive quadrature, seeded streams.
//! - [`calibration`]: conditional exceedance, threshold calibration, schedules.
//! - [`paradox`]: Monte Carlo demonstrations and extreme-value growth.
//! - [`cli`]: job files, tabular output and the subcommands behind the binary.

pub mod calibration;
pub mod cli;
mod error;
pub mod gaussian;
pub mod paradox;

pub use calibration::{
    acceptance_probability, calibrate_threshold, conditional_exceedance, evaluate_compliance,
    marginal_exceedance, next_exceeds_max_probability, threshold_schedule, CalibrationResult,
    ComplianceDecision, SafetySpec, SigmaPrior, StandardRule, Verdict,
};
pub use error::{Error, Result};
pub use gaussian::{Probability, SeededStream};

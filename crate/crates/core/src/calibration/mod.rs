//! Calibrated test thresholds.
//!
//! The quantity of interest is the conditional exceedance
//! `P(q > q0 | max(q1..qn) <= t)`: the chance that a future value exceeds the
//! danger level given that a sample of `n` passed the test threshold `t`.
//! With the scale `σ` known this equals the unconditional `1 - Φ(q0/σ)` for
//! every `t` and `n`, so `σ` carries a prior and the conditional becomes a
//! posterior-predictive probability. Calibration finds the largest `t` that
//! keeps it at or below `p0`; a schedule repeats that for larger counts `n'`.

mod compliance;
mod exceedance;
mod solver;
mod types;

pub use compliance::{evaluate_compliance, ComplianceDecision, Verdict};
pub use exceedance::{
    acceptance_probability, conditional_exceedance, marginal_exceedance,
    next_exceeds_max_probability, sigma_for_acceptance,
};
pub use solver::{calibrate_schedule, calibrate_threshold, threshold_schedule};
pub use types::{CalibrationResult, PriorKind, SafetySpec, SigmaPrior, StandardRule};

/// Default calibration tolerance on the achieved probability.
pub const DEFAULT_TOL: f64 = 1e-4;

use super::types::StandardRule;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Safe,
    Unsafe,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplianceDecision {
    pub verdict: Verdict,
    /// Tabulated count whose threshold was applied.
    pub applied_n: u64,
    pub applied_threshold: f64,
    pub observed_max: f64,
}

/// Judges mean-centered `measurements` against `rule`.
///
/// The threshold used is the schedule entry for the largest tabulated count not
/// exceeding the number of measurements.
pub fn evaluate_compliance(rule: &StandardRule, measurements: &[f64]) -> Result<ComplianceDecision> {
    let got = measurements.len();
    if (got as u64) < rule.n_required() {
        return Err(Error::InsufficientData {
            required: rule.n_required(),
            got,
        });
    }
    if let Some(bad) = measurements.iter().find(|x| x.is_nan()) {
        return Err(Error::domain(format!("measurement is not a number: {bad}")));
    }
    let observed_max = measurements
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let (applied_n, applied_threshold) = rule
        .entry_for(got as u64)
        .expect("count >= n_required always has an entry");
    let verdict = if observed_max <= applied_threshold {
        Verdict::Safe
    } else {
        Verdict::Unsafe
    };
    Ok(ComplianceDecision {
        verdict,
        applied_n,
        applied_threshold,
        observed_max,
    })
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Probability;

/// The true danger threshold `q0` and the tolerated probability `p0` that a
/// future (mean-centered) value exceeds it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafetySpec {
    q0: f64,
    p0: Probability,
}

impl SafetySpec {
    pub fn new(q0: f64, p0: f64) -> Result<Self> {
        if !(q0.is_finite() && q0 > 0.0) {
            return Err(Error::domain(format!("q0 must be finite and > 0, got {q0}")));
        }
        if !(p0 > 0.0 && p0 < 0.5) {
            return Err(Error::domain(format!("p0 must lie in (0, 0.5), got {p0}")));
        }
        Ok(SafetySpec {
            q0,
            p0: Probability::new(p0)?,
        })
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn p0(&self) -> Probability {
        self.p0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorKind {
    LogUniform,
    Point,
}

/// Uncertainty over the measurement scale `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPrior {
    kind: PriorKind,
    sigma_lo: f64,
    sigma_hi: f64,
}

impl SigmaPrior {
    pub fn new(kind: PriorKind, sigma_lo: f64, sigma_hi: f64) -> Result<Self> {
        if !(sigma_lo.is_finite() && sigma_hi.is_finite() && sigma_lo > 0.0) {
            return Err(Error::domain(format!(
                "prior bounds must be finite and positive, got [{sigma_lo}, {sigma_hi}]"
            )));
        }
        match kind {
            PriorKind::LogUniform if sigma_lo >= sigma_hi => Err(Error::domain(format!(
                "log-uniform prior needs sigma_lo < sigma_hi, got [{sigma_lo}, {sigma_hi}]"
            ))),
            PriorKind::Point if sigma_lo != sigma_hi => Err(Error::domain(format!(
                "point prior needs sigma_lo == sigma_hi, got [{sigma_lo}, {sigma_hi}]"
            ))),
            _ => Ok(SigmaPrior {
                kind,
                sigma_lo,
                sigma_hi,
            }),
        }
    }

    /// Density proportional to `1/σ` on `[sigma_lo, sigma_hi]`.
    pub fn log_uniform(sigma_lo: f64, sigma_hi: f64) -> Result<Self> {
        Self::new(PriorKind::LogUniform, sigma_lo, sigma_hi)
    }

    /// Known scale.
    pub fn point(sigma: f64) -> Result<Self> {
        Self::new(PriorKind::Point, sigma, sigma)
    }

    /// `log_uniform(q0/100, 10·q0)`.
    pub fn default_for(spec: &SafetySpec) -> Self {
        SigmaPrior {
            kind: PriorKind::LogUniform,
            sigma_lo: spec.q0() / 100.0,
            sigma_hi: 10.0 * spec.q0(),
        }
    }

    pub fn kind(&self) -> PriorKind {
        self.kind
    }

    pub fn sigma_lo(&self) -> f64 {
        self.sigma_lo
    }

    pub fn sigma_hi(&self) -> f64 {
        self.sigma_hi
    }
}

/// A published standard: required count, its test threshold, and the
/// threshold schedule for larger counts.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardRule {
    schedule: Vec<(u64, f64)>,
}

impl StandardRule {
    /// Builds a rule from `(n', t)` pairs. The first pair is the required count
    /// and its threshold.
    pub fn new(schedule: Vec<(u64, f64)>) -> Result<Self> {
        let Some(&(first, _)) = schedule.first() else {
            return Err(Error::Config("schedule must have at least one entry".into()));
        };
        if first == 0 {
            return Err(Error::Config("schedule counts must be >= 1".into()));
        }
        if let Some(&(n, t)) = schedule.iter().find(|(_, t)| !t.is_finite()) {
            return Err(Error::Config(format!("non-finite threshold {t} at n' = {n}")));
        }
        for w in schedule.windows(2) {
            let ((n1, t1), (n2, t2)) = (w[0], w[1]);
            if n2 <= n1 {
                return Err(Error::Config(format!(
                    "schedule counts must be strictly increasing ({n1} then {n2})"
                )));
            }
            if t2 < t1 {
                return Err(Error::Config(format!(
                    "schedule thresholds must be non-decreasing (t({n1}) = {t1} > t({n2}) = {t2})"
                )));
            }
        }
        Ok(StandardRule { schedule })
    }

    /// A classic single-threshold standard.
    pub fn fixed(n_required: u64, threshold: f64) -> Result<Self> {
        Self::new(vec![(n_required, threshold)])
    }

    pub fn n_required(&self) -> u64 {
        self.schedule[0].0
    }

    /// The test threshold at the required count.
    pub fn threshold(&self) -> f64 {
        self.schedule[0].1
    }

    pub fn schedule(&self) -> &[(u64, f64)] {
        &self.schedule
    }

    /// The entry for the largest tabulated count `<= n_prime`, or `None` when
    /// `n_prime < n_required`.
    pub fn entry_for(&self, n_prime: u64) -> Option<(u64, f64)> {
        let idx = self.schedule.partition_point(|&(n, _)| n <= n_prime);
        idx.checked_sub(1).map(|i| self.schedule[i])
    }
}

/// Outcome of [`calibrate_threshold`](super::calibrate_threshold).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationResult {
    /// Calibrated test threshold.
    pub threshold: f64,
    /// Conditional exceedance at `threshold`.
    pub achieved: Probability,
    /// Bisection steps taken.
    pub iterations: u32,
    /// Final solver bracket; contains `threshold`.
    pub bracket: (f64, f64),
    /// Whether `threshold` was capped at `q0`.
    pub capped: bool,
    /// Largest admissible threshold before capping. `None` when the constraint
    /// holds for every threshold the solver tried.
    pub uncapped: Option<f64>,
}

//! Largest threshold whose conditional exceedance stays within `p0`.
//!
//! `t ↦ conditional_exceedance(t)` is not monotone on `(0, ∞)`. Near zero the
//! likelihood `Φ(t/σ)ⁿ` flattens to `2⁻ⁿ` and the posterior falls back to the
//! prior; for large `t` the conditioning event stops excluding large `σ`. In
//! between it dips, so the admissible set is an interval and we want its right
//! end. The search first finds one admissible point (walking up from `q0` if
//! `q0` is admissible, down otherwise), then bisects against the inadmissible
//! point just above it.

use rayon::prelude::*;

use super::exceedance::conditional_exceedance;
use super::types::{CalibrationResult, PriorKind, SafetySpec, SigmaPrior, StandardRule};
use crate::error::{Error, Result};
use crate::gaussian::Probability;

/// Lowest threshold probed, as a fraction of `q0`.
const BRACKET_FLOOR: f64 = 1e-6;
/// Threshold resolution, as a fraction of `q0`.
const RESOLUTION: f64 = 1e-9;
const MAX_DOUBLINGS: u32 = 64;
const GOLDEN_STEPS: u32 = 80;

struct Problem<'a> {
    spec: &'a SafetySpec,
    prior: &'a SigmaPrior,
    n: u64,
    p0: f64,
}

impl Problem<'_> {
    fn eval(&self, t: f64) -> Result<f64> {
        conditional_exceedance(self.spec, t, self.n, self.prior).map(Probability::value)
    }

    fn infeasible(&self, min_exceedance: f64) -> Error {
        Error::Infeasible {
            n: self.n,
            p0: self.p0,
            min_exceedance,
            sigma_hi: self.prior.sigma_hi(),
        }
    }

    /// Minimum of the exceedance over `[lo, hi]` by golden-section search in `ln t`.
    fn golden_min(&self, lo: f64, hi: f64) -> Result<(f64, f64)> {
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let (mut a, mut b) = (lo.ln(), hi.ln());
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = self.eval(c.exp())?;
        let mut fd = self.eval(d.exp())?;
        for _ in 0..GOLDEN_STEPS {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = self.eval(c.exp())?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = self.eval(d.exp())?;
            }
        }
        Ok(if fc <= fd { (c.exp(), fc) } else { (d.exp(), fd) })
    }

    /// An admissible threshold `lo` (with its exceedance) and an inadmissible
    /// `hi > lo`, or `None` for `hi` when every probe up to the doubling limit
    /// was admissible.
    fn bracket(&self) -> Result<((f64, f64), Option<f64>)> {
        let q0 = self.spec.q0();
        let at_q0 = self.eval(q0)?;
        if at_q0 <= self.p0 {
            let mut lo = (q0, at_q0);
            for _ in 0..MAX_DOUBLINGS {
                let t = 2.0 * lo.0;
                let f = self.eval(t)?;
                if f > self.p0 {
                    return Ok((lo, Some(t)));
                }
                lo = (t, f);
            }
            return Ok((lo, None));
        }

        let floor = BRACKET_FLOOR * q0;
        let mut above = q0;
        let mut best = at_q0;
        while above > floor {
            let t = (0.5 * above).max(floor);
            let f = self.eval(t)?;
            if f <= self.p0 {
                return Ok(((t, f), Some(above)));
            }
            best = best.min(f);
            above = t;
        }
        // The admissible dip may sit between two probes.
        let (t_min, f_min) = self.golden_min(floor, q0)?;
        if f_min <= self.p0 {
            // t_min lies below the right end of the admissible interval; the
            // next halving probe above it is inadmissible.
            let mut hi = q0;
            while 0.5 * hi > t_min {
                hi *= 0.5;
            }
            return Ok(((t_min, f_min), Some(hi)));
        }
        Err(self.infeasible(best.min(f_min)))
    }
}

/// Largest threshold `t` with `conditional_exceedance(spec, t, n, prior) <= p0`.
///
/// Bisection stops once the bracket is narrower than `1e-9·q0` or the
/// admissible end is within `tol` of `p0`. With `cap_at_q0`, a solution above
/// `q0` (or an unbounded one) is replaced by `q0` and flagged as capped.
pub fn calibrate_threshold(
    spec: &SafetySpec,
    n: u64,
    prior: &SigmaPrior,
    cap_at_q0: bool,
    tol: Probability,
) -> Result<CalibrationResult> {
    if n == 0 {
        return Err(Error::domain("measurement count n must be >= 1"));
    }
    if !(tol.value() > 0.0) {
        return Err(Error::domain("calibration tolerance must be > 0"));
    }
    let problem = Problem {
        spec,
        prior,
        n,
        p0: spec.p0().value(),
    };
    let q0 = spec.q0();

    if prior.kind() == PriorKind::Point {
        // Conditioning is vacuous: the exceedance is the same at every threshold.
        let f = problem.eval(q0)?;
        if f > problem.p0 {
            return Err(problem.infeasible(f));
        }
        if !cap_at_q0 {
            return Err(Error::Solver(format!(
                "no finite largest threshold: exceedance {f:.6e} <= p0 at every threshold \
                 under a point prior"
            )));
        }
        return Ok(CalibrationResult {
            threshold: q0,
            achieved: Probability::clamped(f),
            iterations: 0,
            bracket: (q0, q0),
            capped: true,
            uncapped: None,
        });
    }

    let ((mut lo, mut f_lo), hi) = problem.bracket()?;
    let Some(mut hi) = hi else {
        if cap_at_q0 {
            let f = problem.eval(q0)?;
            return Ok(CalibrationResult {
                threshold: q0,
                achieved: Probability::clamped(f),
                iterations: 0,
                bracket: (q0, lo),
                capped: true,
                uncapped: None,
            });
        }
        return Err(Error::Solver(format!(
            "bracket expansion failed: exceedance still <= p0 at threshold {lo:e}"
        )));
    };

    let resolution = RESOLUTION * q0;
    let mut iterations = 0;
    while hi - lo > resolution && problem.p0 - f_lo > tol.value() {
        let mid = 0.5 * (lo + hi);
        let f = problem.eval(mid)?;
        if f <= problem.p0 {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
        iterations += 1;
    }

    if cap_at_q0 && lo > q0 {
        let f = problem.eval(q0)?;
        return Ok(CalibrationResult {
            threshold: q0,
            achieved: Probability::clamped(f),
            iterations,
            bracket: (q0, hi),
            capped: true,
            uncapped: Some(lo),
        });
    }
    Ok(CalibrationResult {
        threshold: lo,
        achieved: Probability::clamped(f_lo),
        iterations,
        bracket: (lo, hi),
        capped: false,
        uncapped: Some(lo),
    })
}

/// Calibrates every count in `n_list`, keeping the full diagnostics.
pub fn calibrate_schedule(
    spec: &SafetySpec,
    prior: &SigmaPrior,
    n_list: &[u64],
    cap_at_q0: bool,
    tol: Probability,
) -> Result<Vec<(u64, CalibrationResult)>> {
    if n_list.is_empty() {
        return Err(Error::Config("n_list must be non-empty".into()));
    }
    if let Some(w) = n_list.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!(
            "n_list must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    // Collect first so the reported failure is always the smallest failing n'.
    let results: Vec<_> = n_list
        .par_iter()
        .map(|&n| (n, calibrate_threshold(spec, n, prior, cap_at_q0, tol)))
        .collect();
    results
        .into_iter()
        .map(|(n, r)| {
            r.map(|r| (n, r)).map_err(|e| Error::Schedule {
                n_prime: n,
                source: Box::new(e),
            })
        })
        .collect()
}

/// The threshold schedule `t(n')` over `n_list`; the first count is the
/// required one.
pub fn threshold_schedule(
    spec: &SafetySpec,
    prior: &SigmaPrior,
    n_list: &[u64],
    cap_at_q0: bool,
    tol: Probability,
) -> Result<StandardRule> {
    let entries = calibrate_schedule(spec, prior, n_list, cap_at_q0, tol)?;
    StandardRule::new(entries.iter().map(|(n, r)| (*n, r.threshold)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::marginal_exceedance;

    fn tol() -> Probability {
        Probability::new(1e-4).unwrap()
    }

    #[test]
    fn point_prior_within_budget_caps_at_q0() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::point(0.3).unwrap();
        let r = calibrate_threshold(&spec, 40, &prior, true, tol()).unwrap();
        assert_eq!(r.threshold, 1.0);
        assert!(r.capped);
        assert_eq!(r.uncapped, None);
        assert_eq!(r.achieved, marginal_exceedance(&spec, 0.3).unwrap());
        assert!(calibrate_threshold(&spec, 40, &prior, false, tol()).is_err());
    }

    #[test]
    fn point_prior_over_budget_is_infeasible() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::point(0.5).unwrap();
        let err = calibrate_threshold(&spec, 40, &prior, true, tol()).unwrap_err();
        assert!(err.is_infeasible(), "{err}");
    }

    #[test]
    fn prior_on_huge_sigma_with_one_measurement_is_infeasible() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::log_uniform(5.0, 50.0).unwrap();
        let err = calibrate_threshold(&spec, 1, &prior, true, tol()).unwrap_err();
        match err {
            Error::Infeasible { sigma_hi, .. } => assert_eq!(sigma_hi, 50.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uncapped_fixed_point() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::log_uniform(0.01, 10.0).unwrap();
        let r = calibrate_threshold(&spec, 40, &prior, false, tol()).unwrap();
        assert!(!r.capped);
        assert!((r.achieved.value() - 0.01).abs() <= 1e-4);
        assert!(r.achieved.value() <= 0.01);
        assert!(r.bracket.0 <= r.threshold && r.threshold <= r.bracket.1);
        let check = conditional_exceedance(&spec, r.threshold, 40, &prior).unwrap();
        assert_eq!(check, r.achieved);
    }

    #[test]
    fn downward_search_below_q0() {
        // A wide prior with few measurements pushes the solution below q0.
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::log_uniform(0.05, 2.0).unwrap();
        let r = calibrate_threshold(&spec, 5, &prior, true, tol()).unwrap();
        assert!(!r.capped);
        assert!(r.threshold > 0.0 && r.threshold < 1.0, "{r:?}");
        assert!((r.achieved.value() - 0.01).abs() <= 1e-4);
    }

    #[test]
    fn capped_reports_uncapped_value() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::log_uniform(0.01, 10.0).unwrap();
        let r = calibrate_threshold(&spec, 40, &prior, true, tol()).unwrap();
        assert!(r.capped);
        assert_eq!(r.threshold, 1.0);
        assert!(r.uncapped.unwrap() > 1.0);
        assert!(r.achieved.value() < 0.01);
    }

    #[test]
    fn schedule_rejects_bad_lists() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::default_for(&spec);
        assert!(threshold_schedule(&spec, &prior, &[], true, tol()).is_err());
        assert!(threshold_schedule(&spec, &prior, &[40, 40], true, tol()).is_err());
        assert!(threshold_schedule(&spec, &prior, &[80, 40], true, tol()).is_err());
    }

    #[test]
    fn schedule_annotates_failing_entry() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::point(0.5).unwrap();
        match threshold_schedule(&spec, &prior, &[10, 20], true, tol()).unwrap_err() {
            Error::Schedule { n_prime, source } => {
                assert_eq!(n_prime, 10);
                assert!(source.is_infeasible());
            }
            other => panic!("{other:?}"),
        }
    }
}

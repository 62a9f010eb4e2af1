//! Seeded Monte Carlo demonstrations of the over-measurement paradox, plus the
//! growth of the expected sample maximum that drives it.
//!
//! Every simulation splits its trials into fixed-size blocks with their own
//! generators (see [`SeededStream`]) and merges block results in block order,
//! so output does not depend on thread count.

use rand::Rng;

use crate::calibration::{SafetySpec, SigmaPrior, StandardRule};
use crate::calibration::PriorKind;
use crate::error::{Error, Result};
use crate::gaussian::{
    integrate_with, ln_cdf, normal, pdf, Probability, QuadratureOptions, SeededStream,
};


/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A binomial Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub estimate: Probability,
    /// `sqrt(p(1-p)/m)` where `m` is the number of runs the estimate is taken
    /// over: `trials`, or `accepted_runs` for conditional estimates.
    pub standard_error: f64,
    pub trials: u64,
    /// Runs that passed the test (compliance) or survived conditioning
    /// (conditional exceedance). Equals `trials` for the minimal-effort run.
    pub accepted_runs: u64,
}

impl SimulationReport {
    fn binomial(hits: u64, over: u64, trials: u64, accepted_runs: u64) -> Self {
        let p = hits as f64 / over as f64;
        SimulationReport {
            estimate: Probability::clamped(p),
            standard_error: (p * (1.0 - p) / over as f64).sqrt(),
            trials,
            accepted_runs,
        }
    }

    /// `|estimate - expected|` in standard errors. Infinite if the standard
    /// error is zero and the values differ.
    pub fn z_score(&self, expected: f64) -> f64 {
        let d = (self.estimate.value() - expected).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.standard_error
        }
    }
}

fn check_trials(trials: u64) -> Result<usize> {
    if trials == 0 {
        return Err(Error::domain("trials must be >= 1"));
    }
    usize::try_from(trials).map_err(|_| Error::domain("trials does not fit in memory indexing"))
}

fn check_n(n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::domain("measurement count n must be >= 1"));
    }
    usize::try_from(n).map_err(|_| Error::domain("n too large"))
}

fn max_of<R: Rng>(rng: &mut R, n: usize) -> f64 {
    (0..n).map(|_| normal(rng)).fold(f64::NEG_INFINITY, f64::max)
}

/// The minimal-effort designer: after `n` measurements the design is scaled
/// until the largest one sits exactly on the (unit) test threshold. Returns the
/// frequency with which one further measurement at that scale exceeds the
/// threshold. By scale invariance the expectation is `1/(n+1)`.
pub fn simulate_minimal_effort(n: u64, trials: u64, stream: SeededStream) -> Result<SimulationReport> {
    let n = check_n(n)?;
    let trials_usize = check_trials(trials)?;
    const THRESHOLD: f64 = 1.0;
    let hits: u64 = stream
        .run_blocks(trials_usize, |rng, len| {
            let mut hits = 0u64;
            for _ in 0..len {
                let m = max_of(rng, n);
                // Positive rescale; a non-positive maximum lands on -THRESHOLD.
                let scale = THRESHOLD / m.abs();
                let next = normal(rng) * scale;
                if next > m * scale {
                    hits += 1;
                }
            }
            hits
        })
        .into_iter()
        .sum();
    Ok(SimulationReport::binomial(hits, trials, trials, trials))
}

/// Rejection-sampling estimate of `P(q > q0 | max(q1..qn) <= threshold)`:
/// draw `σ` from the prior, draw `n` measurements, keep the run if all pass,
/// then check one more draw against `q0`.
///
/// Independent of the quadrature route in
/// [`conditional_exceedance`](crate::calibration::conditional_exceedance).
pub fn estimate_conditional_exceedance(
    spec: &SafetySpec,
    prior: &SigmaPrior,
    threshold: f64,
    n: u64,
    trials: u64,
    stream: SeededStream,
) -> Result<SimulationReport> {
    let n_usize = check_n(n)?;
    let trials_usize = check_trials(trials)?;
    let q0 = spec.q0();
    let (ln_lo, ln_hi) = (prior.sigma_lo().ln(), prior.sigma_hi().ln());
    let point = prior.kind() == PriorKind::Point;

    let blocks = stream.run_blocks(trials_usize, |rng, len| {
        let (mut kept, mut hits) = (0u64, 0u64);
        for _ in 0..len {
            let sigma = if point {
                prior.sigma_lo()
            } else {
                rng.random_range(ln_lo..ln_hi).exp()
            };
            let z_max = threshold / sigma;
            if (0..n_usize).any(|_| normal(rng) > z_max) {
                continue;
            }
            kept += 1;
            if normal(rng) * sigma > q0 {
                hits += 1;
            }
        }
        (kept, hits)
    });
    let (kept, hits) = blocks
        .into_iter()
        .fold((0, 0), |(k, h), (bk, bh)| (k + bk, h + bh));
    if kept == 0 {
        return Err(Error::InfeasibleConditioning { threshold, n });
    }
    Ok(SimulationReport::binomial(hits, kept, trials, kept))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignMode {
    /// Measurements at a fixed true scale.
    FixedSigma,
    /// The first `n_required` measurements are scaled so their maximum sits on
    /// `t(n_required)`; any extra measurements share that scale.
    MinimalEffort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// `t(n_required)` regardless of how many measurements were taken.
    FixedThreshold,
    /// The schedule entry for the number of measurements taken.
    Schedule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignScenario {
    pub mode: DesignMode,
    /// True scale, used by [`DesignMode::FixedSigma`].
    pub sigma_true: f64,
    pub rule: StandardRule,
    pub n_performed: u64,
    pub trials: u64,
    pub stream: SeededStream,
}

/// Rejection frequency of the design in `scenario` under the chosen rule.
///
/// Both rule kinds consume the same draws for a given stream, so comparing them
/// on one stream is a common-random-numbers comparison.
pub fn simulate_compliance(scenario: &DesignScenario, rule_kind: RuleKind) -> Result<SimulationReport> {
    let n_performed = check_n(scenario.n_performed)?;
    let trials = check_trials(scenario.trials)?;
    let rule = &scenario.rule;
    let Some((_, scheduled)) = rule.entry_for(scenario.n_performed) else {
        return Err(Error::Config(format!(
            "schedule has no entry at or below n' = {} (n_required = {})",
            scenario.n_performed,
            rule.n_required()
        )));
    };
    let threshold = match rule_kind {
        RuleKind::FixedThreshold => rule.threshold(),
        RuleKind::Schedule => scheduled,
    };
    let n_required = rule.n_required() as usize;
    let sigma = scenario.sigma_true;
    if scenario.mode == DesignMode::FixedSigma && !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("sigma_true must be > 0, got {sigma}")));
    }
    let anchor = rule.threshold();

    let rejected: u64 = scenario
        .stream
        .run_blocks(trials, |rng, len| {
            let mut rejected = 0u64;
            for _ in 0..len {
                let observed_max = match scenario.mode {
                    DesignMode::FixedSigma => sigma * max_of(rng, n_performed),
                    DesignMode::MinimalEffort => {
                        let first = max_of(rng, n_required);
                        let rest = max_of(rng, n_performed - n_required);
                        let scale = anchor / first.abs();
                        (first * scale).max(rest * scale)
                    }
                };
                if observed_max > threshold {
                    rejected += 1;
                }
            }
            rejected
        })
        .into_iter()
        .sum();
    let trials = scenario.trials;
    Ok(SimulationReport::binomial(rejected, trials, trials, trials - rejected))
}

/// One point of the paradox curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParadoxPoint {
    pub n_prime: u64,
    /// Threshold the schedule applies at `n_prime`.
    pub scheduled_threshold: f64,
    pub rejection_fixed: SimulationReport,
    pub rejection_schedule: SimulationReport,
}

/// Rejection rates of a design at true scale `sigma_true` under the fixed and
/// the scheduled rule, for each count in `n_list`. Row `i` uses stream index
/// `stream.stream_index + i` for both rules.
pub fn paradox_curve(
    rule: &StandardRule,
    sigma_true: f64,
    n_list: &[u64],
    trials: u64,
    stream: SeededStream,
) -> Result<Vec<ParadoxPoint>> {
    n_list
        .iter()
        .enumerate()
        .map(|(i, &n_prime)| {
            let Some((_, scheduled_threshold)) = rule.entry_for(n_prime) else {
                return Err(Error::Config(format!(
                    "n' = {n_prime} is below the required count {}",
                    rule.n_required()
                )));
            };
            let scenario = DesignScenario {
                mode: DesignMode::FixedSigma,
                sigma_true,
                rule: rule.clone(),
                n_performed: n_prime,
                trials,
                stream: stream.with_index(stream.stream_index + i as u64),
            };
            Ok(ParadoxPoint {
                n_prime,
                scheduled_threshold,
                rejection_fixed: simulate_compliance(&scenario, RuleKind::FixedThreshold)?,
                rejection_schedule: simulate_compliance(&scenario, RuleKind::Schedule)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxMethod {
    /// `γ·sqrt(2 ln n)·σ`, with `γ` the Euler–Mascheroni constant, as the
    /// growth law is often quoted. It is not the leading term of the exact
    /// expectation, which grows like `sqrt(2 ln n)·σ`.
    PaperAsymptotic,
    /// `σ·∫ x·n·φ(x)·Φ(x)^(n-1) dx` by quadrature.
    Exact,
    /// Mean of simulated maxima.
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedMax {
    pub value: f64,
    /// Present for [`MaxMethod::MonteCarlo`].
    pub standard_error: Option<f64>,
}

const EXACT_LO: f64 = -12.0;
const EXACT_HI: f64 = 14.0;

fn exact_expected_max(n: u64) -> Result<f64> {
    if n == 1 {
        return Ok(0.0);
    }
    let ln_n = (n as f64).ln();
    let m = (n - 1) as f64;
    // Density of the maximum, evaluated in log space.
    let density = |x: f64| (ln_n + pdf(x).ln() + m * ln_cdf(x)).exp();
    let opts = QuadratureOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        initial_intervals: 26,
        ..Default::default()
    };
    Ok(integrate_with(|x| x * density(x), EXACT_LO, EXACT_HI, &opts)?.value)
}

/// Running (count, mean, M2) merged by Chan's formula.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }
}

/// Expected maximum of `n` draws from `N(0, σ²)`. `trials` and `stream` are
/// only used by [`MaxMethod::MonteCarlo`].
pub fn expected_max(
    n: u64,
    sigma: f64,
    method: MaxMethod,
    trials: u64,
    stream: SeededStream,
) -> Result<ExpectedMax> {
    let n_usize = check_n(n)?;
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be finite and > 0, got {sigma}")));
    }
    match method {
        MaxMethod::PaperAsymptotic => {
            if n < 2 {
                return Err(Error::domain("the asymptotic formula needs n >= 2"));
            }
            Ok(ExpectedMax {
                value: EULER_GAMMA * (2.0 * (n as f64).ln()).sqrt() * sigma,
                standard_error: None,
            })
        }
        MaxMethod::Exact => Ok(ExpectedMax {
            value: sigma * exact_expected_max(n)?,
            standard_error: None,
        }),
        MaxMethod::MonteCarlo => {
            let trials = check_trials(trials)?;
            let m = stream
                .run_blocks(trials, |rng, len| {
                    let mut m = Moments::default();
                    for _ in 0..len {
                        m.push(max_of(rng, n_usize));
                    }
                    m
                })
                .into_iter()
                .fold(Moments::default(), Moments::merge);
            let variance = if m.count > 1.0 { m.m2 / (m.count - 1.0) } else { 0.0 };
            Ok(ExpectedMax {
                value: sigma * m.mean,
                standard_error: Some(sigma * (variance / m.count).sqrt()),
            })
        }
    }
}

/// `Σ_{k=1..n} 1/k - ln n`, summed smallest terms first with compensation.
pub fn euler_gamma_partial(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for k in (1..=n).rev() {
        let term = 1.0 / k as f64;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum - (n as f64).ln())
}

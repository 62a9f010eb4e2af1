use clap::ValueEnum;

use super::job::JobSpec;
use super::table::{fmt_num, parse_schedule, Cell, Table};
use super::{CliError, Output, EXIT_VERIFY_FAILED};
use crate::calibration::{
    acceptance_probability, calibrate_schedule, calibrate_threshold, sigma_for_acceptance,
    threshold_schedule,
};
use crate::error::Error;
use crate::gaussian::{Probability, SeededStream};
use crate::paradox::{
    estimate_conditional_exceedance, expected_max, paradox_curve, simulate_minimal_effort,
    MaxMethod,
};

/// `verify` row `i` draws from stream index `VERIFY_STREAM_BASE + i`.
pub const VERIFY_STREAM_BASE: u64 = 100;
/// `simulate --mode minimal-effort` row `i` uses `MINIMAL_EFFORT_STREAM_BASE + i`.
pub const MINIMAL_EFFORT_STREAM_BASE: u64 = 200;
/// `simulate --mode paradox` row `i` uses `PARADOX_STREAM_BASE + i` for both rules.
pub const PARADOX_STREAM_BASE: u64 = 300;
/// `expected-max` Monte Carlo stream index.
pub const EXPECTED_MAX_STREAM: u64 = 400;
/// Fixed-rule acceptance at `n` that sets the default paradox `sigma_true`.
pub const PARADOX_ACCEPTANCE: f64 = 0.9;
/// Verification passes while the estimate is within this many standard errors
/// above `p0`.
const VERIFY_BAND: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimulateMode {
    MinimalEffort,
    /// `None` uses the scale with fixed-rule acceptance [`PARADOX_ACCEPTANCE`].
    Paradox { sigma_true: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaxMethodArg {
    PaperAsymptotic,
    Exact,
    MonteCarlo,
    All,
}

/// Columns: `n,threshold,achieved,capped,iterations,uncapped_threshold,bracket_lo,bracket_hi`.
/// `uncapped_threshold` is empty when the constraint held at every probe.
pub fn cmd_calibrate(job: &JobSpec) -> Result<Output, CliError> {
    let r = calibrate_threshold(&job.spec, job.n_required, &job.prior, job.cap_at_q0, job.tol)?;
    let mut t = Table::new(&[
        "n",
        "threshold",
        "achieved",
        "capped",
        "iterations",
        "uncapped_threshold",
        "bracket_lo",
        "bracket_hi",
    ]);
    t.row(vec![
        job.n_required.into(),
        r.threshold.into(),
        r.achieved.value().into(),
        r.capped.into(),
        u64::from(r.iterations).into(),
        r.uncapped.into(),
        r.bracket.0.into(),
        r.bracket.1.into(),
    ]);
    Ok(Output::ok(t.finish()))
}

/// Columns: `n_prime,t,achieved,capped`, one row per `n_list` entry.
pub fn cmd_schedule(job: &JobSpec) -> Result<Output, CliError> {
    let entries = calibrate_schedule(&job.spec, &job.prior, &job.n_list, job.cap_at_q0, job.tol)?;
    let mut t = Table::new(&["n_prime", "t", "achieved", "capped"]);
    for (n, r) in &entries {
        t.row(vec![
            (*n).into(),
            r.threshold.into(),
            r.achieved.value().into(),
            r.capped.into(),
        ]);
    }
    Ok(Output::ok(t.finish()))
}

/// Columns: `n_prime,t,estimate,standard_error,accepted_runs,trials,pass`.
///
/// Each row estimates the conditional exceedance at `(n', t)` by rejection
/// sampling from the job's prior and passes if the estimate is at most
/// `p0 + 4·SE`. Rows where no run survives conditioning fail with empty
/// estimate cells. Any failure sets exit status 3.
pub fn cmd_verify(job: &JobSpec, schedule_text: &str) -> Result<Output, CliError> {
    let rows = parse_schedule(schedule_text)?;
    let p0 = job.spec.p0().value();
    let mut table = Table::new(&[
        "n_prime",
        "t",
        "estimate",
        "standard_error",
        "accepted_runs",
        "trials",
        "pass",
    ]);
    let mut failures = 0;
    for (i, &(n, t)) in rows.iter().enumerate() {
        let stream = SeededStream::new(job.seed, VERIFY_STREAM_BASE + i as u64);
        match estimate_conditional_exceedance(&job.spec, &job.prior, t, n, job.trials, stream) {
            Ok(r) => {
                let pass = r.estimate.value() <= p0 + VERIFY_BAND * r.standard_error;
                failures += usize::from(!pass);
                table.row(vec![
                    n.into(),
                    t.into(),
                    r.estimate.value().into(),
                    r.standard_error.into(),
                    r.accepted_runs.into(),
                    job.trials.into(),
                    pass.into(),
                ]);
            }
            Err(Error::InfeasibleConditioning { .. }) => {
                failures += 1;
                table.row(vec![
                    n.into(),
                    t.into(),
                    Cell::Empty,
                    Cell::Empty,
                    0u64.into(),
                    job.trials.into(),
                    false.into(),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut out = Output::ok(table.finish());
    if failures > 0 {
        out.exit_code = EXIT_VERIFY_FAILED;
        out = out.note(format!("verification failed for {failures} of {} rows", rows.len()));
    }
    Ok(out)
}

/// Minimal-effort columns: `n,estimate,standard_error,expected` with
/// `expected = 1/(n+1)`, one row per `n_list` entry.
///
/// Paradox columns: `n_prime,t,rejection_fixed,se_fixed,rejection_schedule,
/// se_schedule,expected_fixed,expected_schedule`, where the expected columns are
/// the closed forms `1 - Φ(t/σ)^n'`.
pub fn cmd_simulate(job: &JobSpec, mode: SimulateMode) -> Result<Output, CliError> {
    match mode {
        SimulateMode::MinimalEffort => {
            let mut table = Table::new(&["n", "estimate", "standard_error", "expected"]);
            for (i, &n) in job.n_list.iter().enumerate() {
                let stream = SeededStream::new(job.seed, MINIMAL_EFFORT_STREAM_BASE + i as u64);
                let r = simulate_minimal_effort(n, job.trials, stream)?;
                table.row(vec![
                    n.into(),
                    r.estimate.value().into(),
                    r.standard_error.into(),
                    (1.0 / (n as f64 + 1.0)).into(),
                ]);
            }
            Ok(Output::ok(table.finish()))
        }
        SimulateMode::Paradox { sigma_true } => {
            let rule =
                threshold_schedule(&job.spec, &job.prior, &job.n_list, job.cap_at_q0, job.tol)?;
            let sigma = match sigma_true {
                Some(s) => s,
                None => sigma_for_acceptance(
                    rule.threshold(),
                    rule.n_required(),
                    Probability::new(PARADOX_ACCEPTANCE)?,
                )?,
            };
            let points = paradox_curve(
                &rule,
                sigma,
                &job.n_list,
                job.trials,
                SeededStream::new(job.seed, PARADOX_STREAM_BASE),
            )?;
            let mut table = Table::new(&[
                "n_prime",
                "t",
                "rejection_fixed",
                "se_fixed",
                "rejection_schedule",
                "se_schedule",
                "expected_fixed",
                "expected_schedule",
            ]);
            for p in &points {
                let fixed = acceptance_probability(sigma, rule.threshold(), p.n_prime)?;
                let sched = acceptance_probability(sigma, p.scheduled_threshold, p.n_prime)?;
                table.row(vec![
                    p.n_prime.into(),
                    p.scheduled_threshold.into(),
                    p.rejection_fixed.estimate.value().into(),
                    p.rejection_fixed.standard_error.into(),
                    p.rejection_schedule.estimate.value().into(),
                    p.rejection_schedule.standard_error.into(),
                    fixed.complement().value().into(),
                    sched.complement().value().into(),
                ]);
            }
            Ok(Output::ok(table.finish()).note(format!("sigma_true = {}", fmt_num(sigma))))
        }
    }
}

/// One value on one line for a single method (the Monte Carlo standard error
/// goes to stderr). For `all`: columns `n,sigma,paper_asymptotic,exact,
/// monte_carlo,monte_carlo_se,exact_over_asymptotic,asymptotic_minus_exact`.
pub fn cmd_expected_max(
    n: u64,
    sigma: f64,
    method: MaxMethodArg,
    trials: u64,
    seed: u64,
) -> Result<Output, CliError> {
    let stream = SeededStream::new(seed, EXPECTED_MAX_STREAM);
    let single = |m: MaxMethod| expected_max(n, sigma, m, trials, stream);
    let output = match method {
        MaxMethodArg::PaperAsymptotic => {
            Output::ok(format!("{}\n", fmt_num(single(MaxMethod::PaperAsymptotic)?.value)))
        }
        MaxMethodArg::Exact => Output::ok(format!("{}\n", fmt_num(single(MaxMethod::Exact)?.value))),
        MaxMethodArg::MonteCarlo => {
            let r = single(MaxMethod::MonteCarlo)?;
            Output::ok(format!("{}\n", fmt_num(r.value))).note(format!(
                "standard_error = {}",
                fmt_num(r.standard_error.unwrap_or(f64::NAN))
            ))
        }
        MaxMethodArg::All => {
            let prefactor = single(MaxMethod::PaperAsymptotic)?.value;
            let exact = single(MaxMethod::Exact)?.value;
            let mc = single(MaxMethod::MonteCarlo)?;
            let mut table = Table::new(&[
                "n",
                "sigma",
                "paper_asymptotic",
                "exact",
                "monte_carlo",
                "monte_carlo_se",
                "exact_over_asymptotic",
                "asymptotic_minus_exact",
            ]);
            table.row(vec![
                n.into(),
                sigma.into(),
                prefactor.into(),
                exact.into(),
                mc.value.into(),
                mc.standard_error.into(),
                (exact / prefactor).into(),
                (prefactor - exact).into(),
            ]);
            Output::ok(table.finish())
        }
    };
    Ok(output)
}

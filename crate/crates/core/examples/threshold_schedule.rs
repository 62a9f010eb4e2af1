//! Build a threshold schedule t(n') over a doubling grid of measurement counts.

use overmeasure::calibration::calibrate_schedule;
use overmeasure::{threshold_schedule, Probability, SafetySpec, SigmaPrior};

fn main() -> overmeasure::Result<()> {
    let spec = SafetySpec::new(1.0, 0.01)?;
    let prior = SigmaPrior::log_uniform(0.01, 10.0)?;
    let tol = Probability::new(1e-4)?;
    let n_list = [40, 80, 160, 320, 640];

    let rule = threshold_schedule(&spec, &prior, &n_list, true, tol)?;
    println!("capped schedule (n_required = {}):", rule.n_required());
    for (n, t) in rule.schedule() {
        println!("  n' = {n:>4}  t = {t:.6}");
    }

    // Without the cap the thresholds keep growing, with shrinking increments.
    println!("uncapped:");
    let mut prev: Option<f64> = None;
    for (n, r) in calibrate_schedule(&spec, &prior, &n_list, false, tol)? {
        let step = prev.map(|p| format!("  (+{:.4})", r.threshold - p)).unwrap_or_default();
        println!("  n' = {n:>4}  t = {:.6}{step}", r.threshold);
        prev = Some(r.threshold);
    }
    Ok(())
}

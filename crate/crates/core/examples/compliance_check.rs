//! Judge one set of measurements against a fixed threshold and a schedule.

use overmeasure::{evaluate_compliance, threshold_schedule, Probability, SafetySpec, SigmaPrior, StandardRule};

fn main() -> overmeasure::Result<()> {
    let spec = SafetySpec::new(1.0, 0.01)?;
    let prior = SigmaPrior::default_for(&spec);
    let schedule =
        threshold_schedule(&spec, &prior, &[40, 80, 160], false, Probability::new(1e-4)?)?;
    let fixed = StandardRule::fixed(40, schedule.threshold())?;

    // 80 readings whose largest value sits between t(40) and t(80).
    let peak = 0.5 * (schedule.schedule()[0].1 + schedule.schedule()[1].1);
    let readings: Vec<f64> = (0..80).map(|i| peak * (i as f64 / 79.0)).collect();

    for (name, rule) in [("fixed", &fixed), ("schedule", &schedule)] {
        let d = evaluate_compliance(rule, &readings)?;
        println!(
            "{name:<8} n = {}  threshold {:.4}  max {:.4}  -> {:?}",
            d.applied_n, d.applied_threshold, d.observed_max, d.verdict
        );
    }
    Ok(())
}

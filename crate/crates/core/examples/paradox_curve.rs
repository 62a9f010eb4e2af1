//! Rejection rate of a product that passes 90% of the time at n = 40, as more
//! measurements are taken. The fixed threshold punishes extra measurements;
//! the schedule does not.

use overmeasure::calibration::sigma_for_acceptance;
use overmeasure::paradox::paradox_curve;
use overmeasure::{threshold_schedule, Probability, SafetySpec, SeededStream, SigmaPrior};

fn main() -> overmeasure::Result<()> {
    let spec = SafetySpec::new(1.0, 0.01)?;
    let prior = SigmaPrior::default_for(&spec);
    let n_list = [40, 80, 160, 320, 640];
    // Uncapped, so the schedule actually moves with n'.
    let rule = threshold_schedule(&spec, &prior, &n_list, false, Probability::new(1e-4)?)?;
    let sigma = sigma_for_acceptance(rule.threshold(), 40, Probability::new(0.9)?)?;
    println!("sigma_true = {sigma:.4}");
    println!("{:>5} {:>9} {:>15} {:>15}", "n'", "t(n')", "fixed rule", "schedule");
    for p in paradox_curve(&rule, sigma, &n_list, 100_000, SeededStream::new(1, 0))? {
        println!(
            "{:>5} {:>9.4} {:>15.4} {:>15.4}",
            p.n_prime,
            p.scheduled_threshold,
            p.rejection_fixed.estimate.value(),
            p.rejection_schedule.estimate.value()
        );
    }
    Ok(())
}

//! Check a calibrated schedule by rejection sampling from the prior and
//! comparing with the quadrature value.

use overmeasure::calibration::calibrate_schedule;
use overmeasure::paradox::estimate_conditional_exceedance;
use overmeasure::{Probability, SafetySpec, SeededStream, SigmaPrior};

fn main() -> overmeasure::Result<()> {
    let spec = SafetySpec::new(1.0, 0.01)?;
    let prior = SigmaPrior::default_for(&spec);
    let rows = calibrate_schedule(&spec, &prior, &[10, 40, 160], false, Probability::new(1e-4)?)?;
    for (i, (n, r)) in rows.into_iter().enumerate() {
        let mc = estimate_conditional_exceedance(
            &spec,
            &prior,
            r.threshold,
            n,
            300_000,
            SeededStream::new(11, i as u64),
        )?;
        println!(
            "n = {n:>3}  t = {:.4}  quadrature {:.5}  sampled {:.5} ± {:.5} ({} kept)",
            r.threshold,
            r.achieved.value(),
            mc.estimate.value(),
            mc.standard_error,
            mc.accepted_runs
        );
    }
    Ok(())
}

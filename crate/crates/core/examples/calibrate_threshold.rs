//! Calibrate the acceptance threshold for a fixed number of measurements.
//!
//!     cargo run --example calibrate_threshold -- 40

use overmeasure::{calibrate_threshold, Probability, SafetySpec, SigmaPrior};

fn main() -> overmeasure::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let spec = SafetySpec::new(1.0, 0.01)?;
    let prior = SigmaPrior::default_for(&spec);
    let tol = Probability::new(1e-4)?;

    for cap in [true, false] {
        let r = calibrate_threshold(&spec, n, &prior, cap, tol)?;
        println!(
            "cap_at_q0={cap:<5} t({n}) = {:.6}  achieved {:.6}  capped {}  iterations {}",
            r.threshold,
            r.achieved.value(),
            r.capped,
            r.iterations
        );
        if let Some(u) = r.uncapped {
            println!("  uncapped value before the cap: {u:.6}");
        }
    }
    Ok(())
}

//! Chance that the next measurement exceeds the maximum of the first n.
//! Exchangeability gives exactly 1/(n+1).

use overmeasure::paradox::simulate_minimal_effort;
use overmeasure::{next_exceeds_max_probability, SeededStream};

fn main() -> overmeasure::Result<()> {
    for (i, n) in [1u64, 5, 40, 99].into_iter().enumerate() {
        let r = simulate_minimal_effort(n, 200_000, SeededStream::new(7, i as u64))?;
        let exact = next_exceeds_max_probability(n)?.value();
        println!(
            "n = {n:>3}  simulated {:.5} ± {:.5}  exact {exact:.5}  z = {:.2}",
            r.estimate.value(),
            r.standard_error,
            r.z_score(exact)
        );
    }
    Ok(())
}

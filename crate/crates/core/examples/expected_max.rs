//! Expected maximum of n standard normals: quadrature, simulation, and the
//! γ·sqrt(2 ln n) growth formula for comparison.

use overmeasure::paradox::{expected_max, MaxMethod};
use overmeasure::SeededStream;

fn main() -> overmeasure::Result<()> {
    let stream = SeededStream::new(3, 0);
    println!("{:>6} {:>10} {:>18} {:>10}", "n", "exact", "monte carlo", "γ formula");
    for n in [2u64, 10, 100, 1000, 10_000] {
        let exact = expected_max(n, 1.0, MaxMethod::Exact, 1, stream)?.value;
        let mc = expected_max(n, 1.0, MaxMethod::MonteCarlo, 20_000, stream.with_index(n))?;
        let gamma = expected_max(n, 1.0, MaxMethod::PaperAsymptotic, 1, stream)?.value;
        println!(
            "{n:>6} {exact:>10.5} {:>10.5}±{:.5} {gamma:>10.5}",
            mc.value,
            mc.standard_error.unwrap_or(0.0)
        );
    }
    Ok(())
}

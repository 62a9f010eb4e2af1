//! Test-only oracles, independent of the library's numerical paths.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let n = order as f64;
    (0..order)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite 20-point Gauss–Legendre over `panels` equal panels.
pub fn composite_gl<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let h = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + h * p as f64;
        let c = a + 0.5 * h;
        let panel: f64 = rule.iter().map(|&(x, w)| w * f(c + 0.5 * h * x)).sum();
        total += 0.5 * h * panel;
    }
    total
}

pub fn density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Φ(x) by quadrature of the density: `0.5 ± ∫_0^|x| φ` near the centre,
/// a direct tail integral beyond.
pub fn oracle_cdf(x: f64) -> f64 {
    if x < -3.0 {
        oracle_lower_tail(x)
    } else if x > 3.0 {
        1.0 - oracle_lower_tail(-x)
    } else {
        let half = composite_gl(density, 0.0, x.abs(), 64);
        if x >= 0.0 {
            0.5 + half
        } else {
            0.5 - half
        }
    }
}

/// `∫_{-∞}^{x} φ` for x < 0, truncated 40 units out.
pub fn oracle_lower_tail(x: f64) -> f64 {
    composite_gl(density, x - 40.0, x, 400)
}

/// Bisection of `oracle_cdf(z) = p`.
pub fn oracle_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0_f64, 10.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if oracle_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean of the maximum of n standard normals by composite quadrature, using
/// the oracle CDF.
pub fn oracle_expected_max(n: u32) -> f64 {
    let nf = n as f64;
    composite_gl(
        |x| x * nf * density(x) * oracle_cdf(x).powi(n as i32 - 1),
        -12.0,
        12.0,
        240,
    )
}

/// Binomial standard error.
pub fn binomial_se(p: f64, m: f64) -> f64 {
    (p * (1.0 - p) / m).sqrt()
}

/// Rejection-sampling estimate of P(q > q0 | max of n <= t) with σ log-uniform
/// on [lo, hi]. Returns (estimate, standard error, kept runs). Uses its own
/// generator, separate from the library's streams.
pub fn oracle_conditional_mc(
    q0: f64,
    t: f64,
    n: usize,
    lo: f64,
    hi: f64,
    draws: usize,
    seed: u64,
) -> (f64, f64, usize) {
    use rand::{Rng, SeedableRng};
    use rand_distr::StandardNormal;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let (a, b) = (lo.ln(), hi.ln());
    let (mut kept, mut hits) = (0usize, 0usize);
    for _ in 0..draws {
        let sigma = (a + (b - a) * rng.random::<f64>()).exp();
        let mut ok = true;
        for _ in 0..n {
            let z: f64 = rng.sample(StandardNormal);
            if sigma * z > t {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        kept += 1;
        let z: f64 = rng.sample(StandardNormal);
        if sigma * z > q0 {
            hits += 1;
        }
    }
    let p = hits as f64 / kept as f64;
    (p, binomial_se(p, kept as f64), kept)
}

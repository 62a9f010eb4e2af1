use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::Probability;
use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// ln √(2π)
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this point `ln Φ` is evaluated from the Mills ratio instead of `erfc`.
const LOG_TAIL_CUTOFF: f64 = -8.0;
const MILLS_CF_TERMS: u32 = 80;

#[inline]
pub(crate) fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

#[inline]
pub(crate) fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Φ(x)`, accurate in relative terms for large `x`.
#[inline]
pub(crate) fn sf(x: f64) -> f64 {
    cdf(-x)
}

/// Mills ratio `(1 - Φ(z)) / φ(z)` by its continued fraction, for `z >= 8`.
fn mills_ratio(z: f64) -> f64 {
    let mut tail = z;
    for k in (1..=MILLS_CF_TERMS).rev() {
        tail = z + f64::from(k) / tail;
    }
    1.0 / tail
}

/// `ln Φ(x)` without underflow anywhere on the real line.
pub(crate) fn ln_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < LOG_TAIL_CUTOFF {
        if x == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let z = -x;
        -0.5 * z * z - LN_SQRT_2PI + mills_ratio(z).ln()
    } else if x <= 0.0 {
        cdf(x).ln()
    } else {
        (-sf(x)).ln_1p()
    }
}

/// Acklam's rational approximation for the lower half, `p <= 0.5`.
fn acklam_lower(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Φ⁻¹ for `p` in `(0, 1)`; callers guarantee the range.
pub(crate) fn quantile(p: f64) -> f64 {
    if p > 0.5 {
        // 1 - p is exact here (Sterbenz), so the refinement stays in the lower tail.
        return -quantile(1.0 - p);
    }
    let mut x = acklam_lower(p);
    for _ in 0..2 {
        let err = cdf(x) - p;
        if err == 0.0 {
            break;
        }
        let u = err * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

fn finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be finite, got {x}")))
    }
}

/// Standard normal density φ(x).
pub fn std_normal_pdf(x: f64) -> Result<f64> {
    finite(x, "x")?;
    Ok(pdf(x))
}

/// Standard normal distribution function Φ(x).
pub fn std_normal_cdf(x: f64) -> Result<Probability> {
    finite(x, "x")?;
    Ok(Probability::clamped(cdf(x)))
}

/// Upper tail `1 - Φ(x)`, computed without cancellation.
pub fn std_normal_sf(x: f64) -> Result<Probability> {
    finite(x, "x")?;
    Ok(Probability::clamped(sf(x)))
}

/// Inverse of [`std_normal_cdf`] on the open unit interval.
pub fn std_normal_quantile(p: Probability) -> Result<f64> {
    let p = p.value();
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("quantile requires 0 < p < 1, got {p}")));
    }
    Ok(quantile(p))
}

/// `n · ln Φ(x)`: the log-probability that all of `n` independent standard
/// normal draws fall at or below `x`. Stays finite where `Φ(x)ⁿ` underflows.
pub fn log_cdf_power(x: f64, n: u64) -> Result<f64> {
    finite(x, "x")?;
    if n == 0 {
        return Err(Error::domain("log_cdf_power requires n >= 1"));
    }
    Ok(n as f64 * ln_cdf(x))
}

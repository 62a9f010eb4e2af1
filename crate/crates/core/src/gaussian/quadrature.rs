//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets the tolerance or the evaluation budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const EVALS_PER_RULE: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Hard cap on integrand evaluations.
    pub max_evals: usize,
    /// Equal-width pieces the range is cut into before adapting.
    pub initial_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_evals: 1_000_000,
            initial_intervals: 1,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureOptions {
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut gauss = f_center * WG[3];
    let mut kron = f_center * WGK[7];
    let mut abs_sum = kron.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        *slot = (f1, f2);
        kron += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut asc = WGK[7] * (f_center - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }

    let value = kron * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kron - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment {
        lo,
        hi,
        value,
        error,
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Integrates `f` over `[lo, hi]` with explicit options.
pub fn integrate_with<F>(mut f: F, lo: f64, hi: f64, opts: &QuadratureOptions) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain(format!(
            "integration limits must be finite, got [{lo}, {hi}]"
        )));
    }
    if !(opts.rel_tol > 0.0) || opts.abs_tol < 0.0 || opts.abs_tol.is_nan() {
        return Err(Error::domain(format!(
            "tolerances must satisfy rel_tol > 0, abs_tol >= 0 (got {}, {})",
            opts.rel_tol, opts.abs_tol
        )));
    }
    if lo == hi {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if hi < lo {
        let r = integrate_with(f, hi, lo, opts)?;
        return Ok(Integral {
            value: -r.value,
            ..r
        });
    }

    let pieces = opts.initial_intervals.max(1);
    let width = (hi - lo) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(pieces * 4);
    let mut evaluations = 0;
    for i in 0..pieces {
        let a = lo + width * i as f64;
        let b = if i + 1 == pieces { hi } else { a + width };
        heap.push(kronrod(&mut f, a, b));
        evaluations += EVALS_PER_RULE;
    }

    loop {
        let value = compensated_sum(heap.iter().map(|s| s.value));
        let error: f64 = heap.iter().map(|s| s.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if evaluations + 2 * EVALS_PER_RULE > opts.max_evals || !error.is_finite() {
            return Err(Error::Convergence {
                estimate: value,
                error_bound: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Cannot split further in floating point.
            return Err(Error::Convergence {
                estimate: value,
                error_bound: error,
                evaluations,
            });
        }
        heap.push(kronrod(&mut f, worst.lo, mid));
        heap.push(kronrod(&mut f, mid, worst.hi));
        evaluations += 2 * EVALS_PER_RULE;
    }
}

/// Adaptive estimate of `∫_lo^hi f` to relative tolerance `rel_tol`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_with(f, lo, hi, &QuadratureOptions::with_rel_tol(rel_tol)).map(|r| r.value)
}

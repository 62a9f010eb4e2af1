use super::types::{PriorKind, SafetySpec, SigmaPrior};
use crate::error::{Error, Result};
use crate::gaussian::{
    integrate_with, ln_cdf, quantile, sf, log_cdf_power, Probability, QuadratureOptions,
};

/// Relative tolerance for the numerator and denominator integrals.
const INTEGRAL_REL_TOL: f64 = 1e-10;
/// Pieces of the `ln σ` range before adaptive refinement; the likelihood can
/// switch from ~1 to ~0 over a short stretch.
const INITIAL_PIECES: usize = 16;

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("measurement count n must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("sigma must be finite and > 0, got {sigma}")))
    }
}

/// Probability that one more exchangeable continuous draw exceeds the maximum
/// of `n` earlier draws: exactly `1/(n+1)`.
pub fn next_exceeds_max_probability(n: u64) -> Result<Probability> {
    check_n(n)?;
    Probability::new(1.0 / (n as f64 + 1.0))
}

/// `P(q > q0)` for `q ~ N(0, σ²)`.
pub fn marginal_exceedance(spec: &SafetySpec, sigma: f64) -> Result<Probability> {
    check_sigma(sigma)?;
    Ok(Probability::clamped(sf(spec.q0() / sigma)))
}

/// `Φ(t/σ)ⁿ`: chance that all `n` measurements at true scale `σ` pass threshold `t`.
pub fn acceptance_probability(sigma_true: f64, threshold: f64, n: u64) -> Result<Probability> {
    check_sigma(sigma_true)?;
    check_n(n)?;
    Ok(Probability::clamped(
        log_cdf_power(threshold / sigma_true, n)?.exp(),
    ))
}

/// The scale `σ` at which `n` measurements pass `threshold` with probability
/// `acceptance`.
pub fn sigma_for_acceptance(threshold: f64, n: u64, acceptance: Probability) -> Result<f64> {
    check_n(n)?;
    let a = acceptance.value();
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain(format!("acceptance must lie in (0, 1), got {a}")));
    }
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::domain(format!("threshold must be > 0, got {threshold}")));
    }
    // Per-measurement pass probability a^(1/n), computed as exp(ln(a)/n).
    let per_draw = (a.ln() / n as f64).exp();
    let z = quantile(per_draw);
    if !(z > 0.0) {
        return Err(Error::domain(format!(
            "acceptance {a} at n = {n} needs a non-positive threshold"
        )));
    }
    Ok(threshold / z)
}

/// `P(q > q0 | max(q1..qn) <= threshold)` with `σ` drawn from `prior`.
///
/// The log-uniform prior is flat in `ln σ`, so both integrals run over
/// `[ln sigma_lo, ln sigma_hi]` with unit weight. The likelihood `Φ(t/σ)ⁿ` is
/// evaluated in log space and rescaled by its largest endpoint value before
/// exponentiating; the ratio is unaffected.
pub fn conditional_exceedance(
    spec: &SafetySpec,
    threshold: f64,
    n: u64,
    prior: &SigmaPrior,
) -> Result<Probability> {
    check_n(n)?;
    if !threshold.is_finite() {
        return Err(Error::domain(format!("threshold must be finite, got {threshold}")));
    }
    if prior.kind() == PriorKind::Point {
        return marginal_exceedance(spec, prior.sigma_lo());
    }

    let nf = n as f64;
    let log_lik = |ln_sigma: f64| nf * ln_cdf(threshold / ln_sigma.exp());
    let (u_lo, u_hi) = (prior.sigma_lo().ln(), prior.sigma_hi().ln());
    let peak = log_lik(u_lo).max(log_lik(u_hi));
    let weight = |u: f64| (log_lik(u) - peak).exp();

    let opts = QuadratureOptions {
        rel_tol: INTEGRAL_REL_TOL,
        initial_intervals: INITIAL_PIECES,
        ..Default::default()
    };
    let q0 = spec.q0();
    let denom = integrate_with(weight, u_lo, u_hi, &opts)?.value;
    if !(denom.is_finite() && denom > 0.0) {
        return Err(Error::InfeasibleConditioning { threshold, n });
    }
    let numer = integrate_with(|u| sf(q0 / u.exp()) * weight(u), u_lo, u_hi, &opts)?.value;
    Ok(Probability::clamped(numer / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{cdf, std_normal_quantile};

    fn demo() -> (SafetySpec, SigmaPrior) {
        (
            SafetySpec::new(1.0, 0.01).unwrap(),
            SigmaPrior::log_uniform(0.01, 10.0).unwrap(),
        )
    }

    #[test]
    fn next_exceeds_max_exact() {
        assert_eq!(next_exceeds_max_probability(1).unwrap().value(), 0.5);
        assert_eq!(next_exceeds_max_probability(40).unwrap().value(), 1.0 / 41.0);
        assert!(next_exceeds_max_probability(0).is_err());
    }

    #[test]
    fn marginal_identities() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let sigma = 1.0 / std_normal_quantile(Probability::new(0.99).unwrap()).unwrap();
        let m = marginal_exceedance(&spec, sigma).unwrap().value();
        assert!((m - 0.01).abs() <= 1e-12);

        let tiny = SafetySpec::new(1e-12, 0.01).unwrap();
        assert!((marginal_exceedance(&tiny, 1.0).unwrap().value() - 0.5).abs() < 1e-12);

        assert!(marginal_exceedance(&spec, 0.0).is_err());
        assert!(marginal_exceedance(&spec, -1.0).is_err());
    }

    #[test]
    fn acceptance_basics() {
        assert_eq!(acceptance_probability(0.7, 0.0, 1).unwrap().value(), 0.5);
        let a = acceptance_probability(0.4, 0.9, 20).unwrap().value();
        let b = acceptance_probability(0.4, 0.9, 40).unwrap().value();
        assert!((b - a * a).abs() <= 1e-12);
        assert!(acceptance_probability(0.0, 1.0, 3).is_err());
        assert!(acceptance_probability(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn sigma_for_acceptance_inverts() {
        let s = sigma_for_acceptance(1.0, 40, Probability::new(0.9).unwrap()).unwrap();
        let a = acceptance_probability(s, 1.0, 40).unwrap().value();
        assert!((a - 0.9).abs() < 1e-12, "{a}");
        assert!(sigma_for_acceptance(1.0, 1, Probability::new(0.3).unwrap()).is_err());
    }

    #[test]
    fn point_prior_is_vacuous() {
        let spec = SafetySpec::new(1.0, 0.01).unwrap();
        let prior = SigmaPrior::point(0.4).unwrap();
        let m = marginal_exceedance(&spec, 0.4).unwrap();
        for &(t, n) in &[(0.1, 1), (0.5, 40), (3.0, 1000)] {
            assert_eq!(conditional_exceedance(&spec, t, n, &prior).unwrap(), m);
        }
    }

    #[test]
    fn mixture_bounds() {
        let (spec, prior) = demo();
        let ce = conditional_exceedance(&spec, 0.5, 40, &prior).unwrap().value();
        let upper = marginal_exceedance(&spec, 10.0).unwrap().value();
        assert!(ce > 0.0 && ce < upper, "{ce} vs {upper}");
    }

    #[test]
    fn huge_n_does_not_underflow() {
        let (spec, prior) = demo();
        let ce = conditional_exceedance(&spec, 1.0, 1_000_000, &prior).unwrap().value();
        assert!(ce.is_finite() && ce > 0.0 && ce < 0.01);
        // Tiny threshold: the likelihood is 0.5^n everywhere and would underflow
        // without rescaling.
        let ce = conditional_exceedance(&spec, 1e-9, 100_000, &prior).unwrap().value();
        assert!(ce > 0.1, "{ce}");
    }

    #[test]
    fn flat_likelihood_reverts_to_prior_mean() {
        // threshold 0: Φ(0)ⁿ is constant in σ, so the posterior is the prior.
        let (spec, prior) = demo();
        let ce = conditional_exceedance(&spec, 0.0, 40, &prior).unwrap().value();
        let (a, b) = (0.01f64.ln(), 10f64.ln());
        let mut mean = 0.0;
        let steps = 200_000;
        for i in 0..steps {
            let u = a + (b - a) * (i as f64 + 0.5) / steps as f64;
            mean += cdf(-1.0 / u.exp());
        }
        mean /= steps as f64;
        assert!((ce - mean).abs() < 1e-8, "{ce} vs {mean}");
    }
}

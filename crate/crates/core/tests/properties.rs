use overmeasure::calibration::{
    acceptance_probability, conditional_exceedance, marginal_exceedance,
    next_exceeds_max_probability,
};
use overmeasure::cli::{fmt_num, JobSpec};
use overmeasure::gaussian::{log_cdf_power, std_normal_cdf, std_normal_quantile};
use overmeasure::{SafetySpec, SigmaPrior, StandardRule};
use proptest::prelude::*;

fn phi(x: f64) -> f64 {
    std_normal_cdf(x).unwrap().value()
}

proptest! {
    #[test]
    fn cdf_monotone(a in -40.0f64..40.0, b in -40.0f64..40.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(phi(lo) <= phi(hi));
    }

    #[test]
    fn cdf_reflection(x in -40.0f64..40.0) {
        prop_assert!((phi(x) + phi(-x) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn quantile_roundtrip(x in -6.0f64..6.0) {
        let z = std_normal_quantile(std_normal_cdf(x).unwrap()).unwrap();
        prop_assert!((z - x).abs() <= 1e-8, "x = {}, z = {}", x, z);
    }

    #[test]
    fn log_power_matches_power(x in -37.0f64..10.0, log_n in 0.0f64..14.5) {
        let n = log_n.exp().round() as u64;
        // Above zero, powering the rounded Φ(x) loses n·ε; go through the
        // upper tail instead.
        let p = if x <= 0.0 {
            phi(x).powf(n as f64)
        } else {
            (n as f64 * (-phi(-x)).ln_1p()).exp()
        };
        prop_assume!(p >= 1e-300);
        let e = log_cdf_power(x, n).unwrap().exp();
        prop_assert!(((e - p) / p).abs() <= 1e-10);
    }

    #[test]
    fn next_exceeds_max_inverse(n in 1u64..u32::MAX as u64) {
        let p = next_exceeds_max_probability(n).unwrap().value();
        prop_assert!((p * (n as f64 + 1.0) - 1.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn point_prior_vacuity(
        q0 in 0.1f64..10.0,
        sigma in 0.05f64..5.0,
        t in -3.0f64..20.0,
        n in 1u64..100_000,
    ) {
        let spec = SafetySpec::new(q0, 0.01).unwrap();
        let prior = SigmaPrior::point(sigma).unwrap();
        let c = conditional_exceedance(&spec, t, n, &prior).unwrap().value();
        let m = marginal_exceedance(&spec, sigma).unwrap().value();
        prop_assert!((c - m).abs() <= 1e-10);
    }

    #[test]
    fn acceptance_power_law(sigma in 0.05f64..5.0, t in -1.0f64..3.0, n in 1u64..500) {
        let a = acceptance_probability(sigma, t, n).unwrap().value();
        let b = acceptance_probability(sigma, t, 2 * n).unwrap().value();
        prop_assert!((b - a * a).abs() <= 1e-12);
    }

    #[test]
    fn rule_lookup_never_more_permissive(
        mut counts in proptest::collection::btree_set(1u64..10_000, 1..8),
        query in 1u64..20_000,
    ) {
        let counts: Vec<u64> = std::mem::take(&mut counts).into_iter().collect();
        let schedule: Vec<(u64, f64)> =
            counts.iter().enumerate().map(|(i, &n)| (n, 0.5 + 0.1 * i as f64)).collect();
        let rule = StandardRule::new(schedule.clone()).unwrap();
        match rule.entry_for(query) {
            None => prop_assert!(query < counts[0]),
            Some((n, t)) => {
                prop_assert!(n <= query);
                prop_assert!(schedule.iter().all(|&(m, s)| m > query || s <= t || m < n));
            }
        }
    }

    #[test]
    fn job_roundtrip(
        q0 in 1e-3f64..1e3,
        p0 in 1e-6f64..0.49,
        start in 1u64..1000,
        steps in proptest::collection::vec(1u64..1000, 0..6),
        cap in any::<bool>(),
        tol in 1e-9f64..0.1,
        trials in 1u64..10_000_000,
        seed in any::<u64>(),
        lo_frac in 1e-4f64..0.5,
        hi_frac in 1.0f64..100.0,
    ) {
        let mut n_list = vec![start];
        for s in steps {
            let last = *n_list.last().unwrap();
            n_list.push(last + s);
        }
        let text = format!(
            "q0 = {q0:?}\np0 = {p0:?}\nn_list = {n_list:?}\ncap_at_q0 = {cap}\ntol = {tol:?}\n\
             trials = {trials}\nseed = \"{seed}\"\n[prior]\ntype = \"log_uniform\"\n\
             sigma_lo = {:?}\nsigma_hi = {:?}\n",
            q0 * lo_frac,
            q0 * hi_frac,
        );
        let job = JobSpec::parse(&text).unwrap();
        prop_assert_eq!(job.seed, seed);
        let again = JobSpec::parse(&job.to_toml()).unwrap();
        prop_assert_eq!(again, job);
    }

    #[test]
    fn formatted_numbers_keep_twelve_digits(x in proptest::num::f64::NORMAL) {
        let s = fmt_num(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!(((back - x) / x).abs() <= 5e-12, "{} -> {}", x, s);
    }
}

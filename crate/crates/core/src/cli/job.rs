//! Job files.
//!
//! A job is a TOML document:
//!
//! ```toml
//! q0 = 1.0            # required
//! p0 = 0.01           # default 0.01
//! n = 40              # default: first n_list entry, else 40
//! n_list = [40, 80, 160, 320, 640]   # default: n, 2n, 4n, 8n, 16n
//! cap_at_q0 = true    # default true
//! tol = 1e-4          # default 1e-4
//! trials = 100000     # default 100000
//! seed = 0            # default 0; quote seeds above 2^63 - 1
//!
//! [prior]             # default: log_uniform on [q0/100, 10·q0]
//! type = "log_uniform"   # or "point"
//! sigma_lo = 0.01
//! sigma_hi = 10.0
//! ```
//!
//! Unknown keys are rejected. For a point prior, giving only one of
//! `sigma_lo`/`sigma_hi` sets both.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::calibration::{PriorKind, SafetySpec, SigmaPrior, DEFAULT_TOL};
use crate::gaussian::Probability;

pub const DEFAULT_P0: f64 = 0.01;
pub const DEFAULT_N: u64 = 40;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0;
/// The default `n_list` doubles from `n` up to this multiple of `n`.
pub const DEFAULT_SPAN: u64 = 16;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PriorFile {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    kind: Option<PriorKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma_hi: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    q0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_list: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cap_at_q0: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<SeedValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prior: Option<PriorFile>,
}

/// TOML integers are signed 64-bit, so seeds above `i64::MAX` are written as
/// decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum SeedValue {
    Int(u64),
    Text(String),
}

impl SeedValue {
    fn from_u64(seed: u64) -> Self {
        if seed <= i64::MAX as u64 {
            SeedValue::Int(seed)
        } else {
            SeedValue::Text(seed.to_string())
        }
    }

    fn to_u64(&self) -> Result<u64, CliError> {
        match self {
            SeedValue::Int(v) => Ok(*v),
            SeedValue::Text(s) => s
                .parse()
                .map_err(|_| input(format!("job file: seed must be an unsigned 64-bit integer, got {s:?}"))),
        }
    }
}

/// A fully resolved job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub spec: SafetySpec,
    pub prior: SigmaPrior,
    pub n_required: u64,
    pub n_list: Vec<u64>,
    pub cap_at_q0: bool,
    pub tol: Probability,
    pub trials: u64,
    pub seed: u64,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

impl JobSpec {
    /// `q0 = 1` with every other field at its default.
    pub fn demo() -> Self {
        JobSpec::parse("q0 = 1.0").expect("demo job is valid")
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: JobFile = toml::from_str(text).map_err(|e| input(format!("job file: {e}")))?;
        Self::resolve(file)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(format!("cannot read job file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn resolve(file: JobFile) -> Result<Self, CliError> {
        let q0 = file.q0.ok_or_else(|| input("job file: missing required field `q0`"))?;
        let spec = SafetySpec::new(q0, file.p0.unwrap_or(DEFAULT_P0))
            .map_err(|e| input(format!("job file: {e}")))?;

        let n_required = match (file.n, file.n_list.as_deref()) {
            (Some(n), _) => n,
            (None, Some([first, ..])) => *first,
            (None, _) => DEFAULT_N,
        };
        if n_required == 0 {
            return Err(input("job file: n must be >= 1"));
        }
        let n_list = match file.n_list {
            Some(list) => list,
            None => std::iter::successors(Some(n_required), |&k| k.checked_mul(2))
                .take_while(|&k| k <= n_required.saturating_mul(DEFAULT_SPAN))
                .collect(),
        };
        if n_list.first() != Some(&n_required) {
            return Err(input(format!(
                "job file: n_list must be non-empty and start at n = {n_required}"
            )));
        }
        if n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(input("job file: n_list must be strictly increasing"));
        }

        let prior_file = file.prior.unwrap_or_default();
        let prior = match prior_file.kind.unwrap_or(PriorKind::LogUniform) {
            PriorKind::LogUniform => SigmaPrior::log_uniform(
                prior_file.sigma_lo.unwrap_or(q0 / 100.0),
                prior_file.sigma_hi.unwrap_or(10.0 * q0),
            ),
            PriorKind::Point => {
                let sigma = prior_file
                    .sigma_lo
                    .or(prior_file.sigma_hi)
                    .ok_or_else(|| input("job file: point prior needs sigma_lo"))?;
                SigmaPrior::new(
                    PriorKind::Point,
                    sigma,
                    prior_file.sigma_hi.unwrap_or(sigma),
                )
            }
        }
        .map_err(|e| input(format!("job file: {e}")))?;

        let tol = file.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(input(format!("job file: tol must lie in (0, 1), got {tol}")));
        }
        let trials = file.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(input("job file: trials must be >= 1"));
        }
        Ok(JobSpec {
            spec,
            prior,
            n_required,
            n_list,
            cap_at_q0: file.cap_at_q0.unwrap_or(true),
            tol: Probability::new(tol).map_err(|e| input(e.to_string()))?,
            trials,
            seed: file.seed.map(|s| s.to_u64()).transpose()?.unwrap_or(DEFAULT_SEED),
        })
    }

    /// Serializes every field explicitly.
    pub fn to_toml(&self) -> String {
        let file = JobFile {
            q0: Some(self.spec.q0()),
            p0: Some(self.spec.p0().value()),
            n: Some(self.n_required),
            n_list: Some(self.n_list.clone()),
            cap_at_q0: Some(self.cap_at_q0),
            tol: Some(self.tol.value()),
            trials: Some(self.trials),
            seed: Some(SeedValue::from_u64(self.seed)),
            prior: Some(PriorFile {
                kind: Some(self.prior.kind()),
                sigma_lo: Some(self.prior.sigma_lo()),
                sigma_hi: Some(self.prior.sigma_hi()),
            }),
        };
        toml::to_string(&file).expect("job serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let job = JobSpec::demo();
        assert_eq!(job.spec.q0(), 1.0);
        assert_eq!(job.spec.p0().value(), 0.01);
        assert_eq!(job.n_required, 40);
        assert_eq!(job.n_list, vec![40, 80, 160, 320, 640]);
        assert!(job.cap_at_q0);
        assert_eq!(job.tol.value(), 1e-4);
        assert_eq!(job.trials, 100_000);
        assert_eq!(job.seed, 0);
        assert_eq!(job.prior, SigmaPrior::log_uniform(0.01, 10.0).unwrap());
    }

    #[test]
    fn n_follows_n_list() {
        let job = JobSpec::parse("q0 = 2.0\nn_list = [10, 30]").unwrap();
        assert_eq!(job.n_required, 10);
        let job = JobSpec::parse("q0 = 2.0\nn = 10").unwrap();
        assert_eq!(job.n_list, vec![10, 20, 40, 80, 160]);
        assert!(JobSpec::parse("q0 = 2.0\nn = 10\nn_list = [20, 40]").is_err());
        assert!(JobSpec::parse("q0 = 2.0\nn_list = [20, 20]").is_err());
        assert!(JobSpec::parse("q0 = 2.0\nn_list = []").is_err());
        assert!(JobSpec::parse("q0 = 2.0\nn = 0").is_err());
    }

    #[test]
    fn point_prior_forms() {
        let job = JobSpec::parse("q0 = 1.0\n[prior]\ntype = \"point\"\nsigma_lo = 0.3").unwrap();
        assert_eq!(job.prior, SigmaPrior::point(0.3).unwrap());
        assert!(JobSpec::parse("q0 = 1.0\n[prior]\ntype = \"point\"").is_err());
        assert!(
            JobSpec::parse("q0 = 1.0\n[prior]\ntype = \"point\"\nsigma_lo = 0.3\nsigma_hi = 0.4")
                .is_err()
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(JobSpec::parse("p0 = 0.01").is_err());
        assert!(JobSpec::parse("q0 = 1.0\nbogus = 3").is_err());
        assert!(JobSpec::parse("q0 = 1.0\n[prior]\nshape = 2").is_err());
        assert!(JobSpec::parse("q0 = 1.0\n[prior]\ntype = \"gamma\"").is_err());
        assert!(JobSpec::parse("q0 = 1.0\np0 = 0.7").is_err());
        assert!(JobSpec::parse("q0 = 1.0\ntol = 0").is_err());
        assert!(JobSpec::parse("q0 = 1.0\ntrials = 0").is_err());
        assert!(JobSpec::parse("q0 = ").is_err());
    }

    #[test]
    fn explicit_roundtrip() {
        let job = JobSpec::parse(
            "q0 = 0.1\np0 = 0.001\nn_list = [3, 7, 100]\ncap_at_q0 = false\ntol = 1e-6\n\
             trials = 5\nseed = \"18446744073709551615\"\n[prior]\nsigma_lo = 0.000123\nsigma_hi = 7.5",
        )
        .unwrap();
        assert_eq!(job.seed, u64::MAX);
        assert_eq!(JobSpec::parse(&job.to_toml()).unwrap(), job);
        assert!(JobSpec::parse("q0 = 1.0\nseed = -1").is_err());
        assert!(JobSpec::parse("q0 = 1.0\nseed = \"x\"").is_err());
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of its evaluation budget.
    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    Convergence {
        estimate: f64,
        error_bound: f64,
        evaluations: usize,
    },

    /// The conditioning event `max <= threshold` has negligible probability
    /// under the prior.
    #[error("conditioning event has negligible probability at threshold {threshold} with n = {n}")]
    InfeasibleConditioning { threshold: f64, n: u64 },

    /// No threshold satisfies the exceedance constraint.
    #[error(
        "infeasible: conditional exceedance {min_exceedance:.6e} > p0 = {p0} at every threshold \
         for n = {n}; prior upper bound sigma_hi = {sigma_hi} is too large for this n"
    )]
    Infeasible {
        n: u64,
        p0: f64,
        min_exceedance: f64,
        sigma_hi: f64,
    },

    #[error("solver error: {0}")]
    Solver(String),

    #[error("insufficient data: {got} measurements, standard requires at least {required}")]
    InsufficientData { required: u64, got: usize },

    #[error("configuration error: {0}")]
    Config(String),

    /// A calibration failure for one schedule entry.
    #[error("schedule entry n' = {n_prime}: {source}")]
    Schedule {
        n_prime: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Strips [`Error::Schedule`] annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::Schedule { source, .. } => source.root(),
            other => other,
        }
    }

    /// True when the failure means "no admissible threshold exists".
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self.root(),
            Error::Infeasible { .. } | Error::InfeasibleConditioning { .. }
        )
    }
}

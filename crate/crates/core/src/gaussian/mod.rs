//! Standard-normal primitives, adaptive quadrature and seeded random streams.
//!
//! Everything downstream reduces to three things: `Φ` (and its logarithm far in
//! the left tail), one-dimensional integrals over a scale parameter, and
//! reproducible Gaussian draws for the Monte Carlo checks.

mod normal;
mod quadrature;
mod stream;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use normal::{
    log_cdf_power, std_normal_cdf, std_normal_pdf, std_normal_quantile, std_normal_sf,
};
#[cfg(test)]
pub(crate) use normal::cdf;
pub(crate) use normal::{ln_cdf, pdf, quantile, sf};
pub use quadrature::{integrate, integrate_with, Integral, QuadratureOptions};
pub use stream::{sample_standard_normal, SeededStream, BLOCK_TRIALS};
pub(crate) use stream::normal;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);
    pub const HALF: Probability = Probability(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::domain(format!("probability must lie in [0, 1], got {value}")))
        }
    }

    /// Clamps rounding spill (e.g. `1 + 1e-17`) back into `[0, 1]`.
    pub(crate) fn clamped(value: f64) -> Self {
        debug_assert!(!value.is_nan());
        Probability(value.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_bounds() {
        assert!(Probability::new(0.0).is_ok());
        assert!(Probability::new(1.0).is_ok());
        assert!(Probability::new(-1e-300).is_err());
        assert!(Probability::new(1.0 + f64::EPSILON).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert_eq!(Probability::new(0.25).unwrap().complement().value(), 0.75);
    }
}

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Prob(f64);

impl Prob {
    pub const ZERO: Prob = Prob(0.0);
    pub const HALF: Prob = Prob(0.5);
    pub const ONE: Prob = Prob(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Prob(value))
        } else {
            Err(Error::InvalidProbability(value))
        }
    }

    /// Clamps a computed value that may have drifted by rounding.
    pub(crate) fn saturating(value: f64) -> Self {
        debug_assert!(!value.is_nan());
        Prob(value.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Prob {
        Prob(1.0 - self.0)
    }
}

impl TryFrom<f64> for Prob {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Prob::new(value)
    }
}

impl From<Prob> for f64 {
    fn from(p: Prob) -> f64 {
        p.0
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

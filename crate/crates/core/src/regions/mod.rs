//! Region estimators over a model's parameter space.
//!
//! Finite-space estimators are also described by their acceptance sets: the
//! observations `y` for which each label is included. Coverage and expected
//! size then reduce to Gaussian masses of those sets.

mod bayes;
mod fiducial;
mod improved;
mod realset;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ParamPoint, ParameterSpace};
use crate::specfun::{Prob, RandomStream};

pub use bayes::{bayes_credible_region, bayes_posterior, flat_prior_location_interval};
pub use fiducial::{fiducial_acceptance_rule, fiducial_acceptance_sets, fiducial_region};
pub use improved::improved_acceptance_sets;
pub use realset::{Interval, RealSet};

/// Pivot band `(alpha, beta)` with `0 <= alpha <= beta <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    alpha: Prob,
    beta: Prob,
}

impl RegionSpec {
    pub fn new(alpha: Prob, beta: Prob) -> Result<Self> {
        if alpha > beta {
            return Err(Error::Validation(format!(
                "band needs alpha <= beta, got ({alpha}, {beta})"
            )));
        }
        Ok(RegionSpec { alpha, beta })
    }

    pub fn from_values(alpha: f64, beta: f64) -> Result<Self> {
        RegionSpec::new(Prob::new(alpha)?, Prob::new(beta)?)
    }

    /// The symmetric band `(delta, 1 - delta)`.
    pub fn from_delta(delta: Prob) -> Result<Self> {
        if delta.value() > 0.5 {
            return Err(Error::Validation(format!("delta must be <= 0.5, got {delta}")));
        }
        RegionSpec::new(delta, delta.complement())
    }

    pub fn alpha(&self) -> Prob {
        self.alpha
    }

    pub fn beta(&self) -> Prob {
        self.beta
    }

    /// Nominal coverage `beta - alpha`.
    pub fn width(&self) -> f64 {
        self.beta.value() - self.alpha.value()
    }

    /// Open-band membership; a band edge at 0 or 1 is no constraint, since the
    /// pivot lies strictly inside `(0, 1)` even where `Φ` rounds to 0 or 1.
    pub fn admits(&self, u: f64) -> bool {
        let (a, b) = (self.alpha.value(), self.beta.value());
        a < b && (a == 0.0 || a < u) && (b == 1.0 || u < b)
    }
}

/// The two-point counterexample is only posed for `delta` in `(0, 0.25)`.
pub fn check_counterexample_delta(delta: Prob) -> Result<()> {
    let d = delta.value();
    if d > 0.0 && d < 0.25 {
        Ok(())
    } else {
        Err(Error::Validation(format!("delta must lie in (0, 0.25), got {d}")))
    }
}

/// Estimated subset of the parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamRegion {
    /// Included labels, sorted, out of a space of `space_size` labels.
    Finite { space_size: usize, labels: Vec<usize> },
    /// Included locations.
    Continuous(RealSet),
}

impl ParamRegion {
    pub fn empty(space: ParameterSpace) -> Self {
        match space {
            ParameterSpace::Finite(k) => ParamRegion::Finite {
                space_size: k,
                labels: Vec::new(),
            },
            ParameterSpace::RealLine => ParamRegion::Continuous(RealSet::empty()),
        }
    }

    pub fn full(space: ParameterSpace) -> Self {
        match space {
            ParameterSpace::Finite(k) => ParamRegion::Finite {
                space_size: k,
                labels: (0..k).collect(),
            },
            ParameterSpace::RealLine => ParamRegion::Continuous(RealSet::real_line()),
        }
    }

    pub fn from_membership(included: &[bool]) -> Self {
        ParamRegion::Finite {
            space_size: included.len(),
            labels: included
                .iter()
                .enumerate()
                .filter_map(|(i, &inc)| inc.then_some(i))
                .collect(),
        }
    }

    pub fn contains(&self, theta: ParamPoint) -> bool {
        match (self, theta) {
            (ParamRegion::Finite { labels, .. }, ParamPoint::Label(i)) => {
                labels.binary_search(&i).is_ok()
            }
            (ParamRegion::Continuous(set), ParamPoint::Location(x)) => set.contains(x),
            _ => false,
        }
    }

    /// Cardinality for finite spaces, total length for the real line.
    pub fn size(&self) -> f64 {
        match self {
            ParamRegion::Finite { labels, .. } => labels.len() as f64,
            ParamRegion::Continuous(set) => set.length(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            ParamRegion::Finite { labels, .. } => labels.is_empty(),
            ParamRegion::Continuous(set) => set.is_empty(),
        }
    }
}

/// Per-label acceptance sets of a finite-space estimator: label `i` is in the
/// region for `y` iff `y` lies in `sets[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceRule {
    sets: Vec<RealSet>,
}

impl AcceptanceRule {
    pub fn new(sets: Vec<RealSet>) -> Self {
        AcceptanceRule { sets }
    }

    pub fn sets(&self) -> &[RealSet] {
        &self.sets
    }

    pub fn set(&self, label: usize) -> &RealSet {
        &self.sets[label]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Number of labels accepted at `y`, without building the region.
    pub fn count_at(&self, y: f64) -> usize {
        self.sets.iter().filter(|s| s.contains(y)).count()
    }
}

pub fn rule_region(rule: &AcceptanceRule, y: f64) -> ParamRegion {
    let membership: Vec<bool> = rule.sets.iter().map(|s| s.contains(y)).collect();
    ParamRegion::from_membership(&membership)
}

/// Estimator driven by a uniform pivot independent of `y` and θ: the whole
/// space when `u` from `stream` lands in the band, otherwise nothing.
pub fn degenerate_region(
    spec: &RegionSpec,
    stream: &RandomStream,
    space: ParameterSpace,
) -> ParamRegion {
    if spec.admits(stream.current()) {
        ParamRegion::full(space)
    } else {
        ParamRegion::empty(space)
    }
}

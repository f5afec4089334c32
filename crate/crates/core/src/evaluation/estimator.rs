use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Model, ModelKind, ParamPoint, ParameterSpace, TwoPointGaussianModel};
use crate::regions::{
    bayes_credible_region, fiducial_acceptance_rule, fiducial_region,
    flat_prior_location_interval, improved_acceptance_sets, rule_region, AcceptanceRule,
    ParamRegion, RegionSpec,
};
use crate::specfun::{std_normal_quantile, Prob};

/// A region estimator as evaluated by the Monte Carlo and analytic routes.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    /// Pivot band on `U(y; θ) = P_θ(Y <= y)`.
    Fiducial(RegionSpec),
    /// Two-point estimator with `Ω₀′ ∩ Ω₁ = ∅`.
    Improved { delta: Prob, rule: AcceptanceRule },
    /// Pivot independent of `y` and θ.
    Degenerate(RegionSpec),
    /// Two-point highest-posterior set under prior mass `prior1` on θ=1.
    Bayes { prior1: Prob, level: Prob },
    /// Location-family credible interval under a flat prior.
    FlatPrior(RegionSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Fiducial,
    Improved,
    Degenerate,
    Bayes,
    FlatPrior,
}

impl EstimatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorKind::Fiducial => "fiducial",
            EstimatorKind::Improved => "improved",
            EstimatorKind::Degenerate => "degenerate",
            EstimatorKind::Bayes => "bayes",
            EstimatorKind::FlatPrior => "flat_prior",
        }
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "fiducial" => Ok(EstimatorKind::Fiducial),
            "improved" => Ok(EstimatorKind::Improved),
            "degenerate" => Ok(EstimatorKind::Degenerate),
            "bayes" => Ok(EstimatorKind::Bayes),
            "flat_prior" => Ok(EstimatorKind::FlatPrior),
            other => Err(format!(
                "unknown estimator {other:?} (fiducial, improved, degenerate, bayes, flat_prior)"
            )),
        }
    }
}

impl Estimator {
    pub fn improved(model: &TwoPointGaussianModel, delta: Prob) -> Result<Self> {
        Ok(Estimator::Improved {
            delta,
            rule: improved_acceptance_sets(model, delta)?,
        })
    }

    pub fn kind(&self) -> EstimatorKind {
        match self {
            Estimator::Fiducial(_) => EstimatorKind::Fiducial,
            Estimator::Improved { .. } => EstimatorKind::Improved,
            Estimator::Degenerate(_) => EstimatorKind::Degenerate,
            Estimator::Bayes { .. } => EstimatorKind::Bayes,
            Estimator::FlatPrior(_) => EstimatorKind::FlatPrior,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind().as_str()
    }

    /// Whether the estimator needs the uniform side draw.
    pub(crate) fn uses_side_draw(&self) -> bool {
        matches!(self, Estimator::Degenerate(_))
    }

    /// Target coverage.
    pub fn nominal(&self) -> f64 {
        match self {
            Estimator::Fiducial(s) | Estimator::Degenerate(s) | Estimator::FlatPrior(s) => {
                s.width()
            }
            Estimator::Improved { delta, .. } => 1.0 - 2.0 * delta.value(),
            Estimator::Bayes { level, .. } => level.value(),
        }
    }

    pub fn check_model(&self, model: &ModelKind) -> Result<()> {
        let ok = matches!(
            (self, model),
            (Estimator::Fiducial(_) | Estimator::Degenerate(_), _)
                | (Estimator::Improved { .. } | Estimator::Bayes { .. }, ModelKind::TwoPoint(_))
                | (Estimator::FlatPrior(_), ModelKind::Location(_))
        );
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "estimator {} does not apply to this model",
                self.name()
            )))
        }
    }

    /// Region at observation `y`; `u` is the side uniform used only by the
    /// degenerate estimator.
    pub fn region(&self, model: &ModelKind, y: f64, u: f64) -> Result<ParamRegion> {
        match (self, model) {
            (Estimator::Fiducial(spec), m) => fiducial_region(m, spec, y),
            (Estimator::Improved { rule, .. }, _) => Ok(rule_region(rule, y)),
            (Estimator::Degenerate(spec), m) => {
                let space = m.parameter_space();
                Ok(if spec.admits(u) {
                    ParamRegion::full(space)
                } else {
                    ParamRegion::empty(space)
                })
            }
            (Estimator::Bayes { prior1, level }, ModelKind::TwoPoint(m)) => {
                bayes_credible_region(m, *prior1, *level, y)
            }
            (Estimator::FlatPrior(spec), ModelKind::Location(m)) => {
                flat_prior_location_interval(m, spec, y)
            }
            _ => Err(Error::Validation(format!(
                "estimator {} does not apply to this model",
                self.name()
            ))),
        }
    }

    /// Acceptance sets, for estimators that have a deterministic rule on a
    /// finite parameter space.
    pub fn acceptance_rule(&self, model: &ModelKind) -> Result<Option<AcceptanceRule>> {
        match self {
            Estimator::Improved { rule, .. } => Ok(Some(rule.clone())),
            Estimator::Fiducial(spec) if model.parameter_space().is_finite() => {
                fiducial_acceptance_rule(model, spec).map(Some)
            }
            _ => Ok(None),
        }
    }

    /// Exact coverage at θ where a closed form exists.
    pub fn analytic_coverage(&self, model: &ModelKind, theta: ParamPoint) -> Result<Option<f64>> {
        if let Some(rule) = self.acceptance_rule(model)? {
            let ParamPoint::Label(i) = theta else {
                return Err(Error::Parameter(format!("{theta:?} is not a label")));
            };
            let (mean, sigma) = model.normal_params(theta)?;
            return Ok(Some(rule.set(i).gaussian_mass(mean, sigma)?.value()));
        }
        match self {
            Estimator::Fiducial(spec) | Estimator::Degenerate(spec) => Ok(Some(spec.width())),
            _ => Ok(None),
        }
    }

    /// Exact `E_{y|θ} |region(y)|` where a closed form exists.
    pub fn analytic_size(&self, model: &ModelKind, theta: ParamPoint) -> Result<Option<f64>> {
        if let Some(rule) = self.acceptance_rule(model)? {
            let (mean, sigma) = model.normal_params(theta)?;
            let mut total = 0.0;
            for set in rule.sets() {
                total += set.gaussian_mass(mean, sigma)?.value();
            }
            return Ok(Some(total));
        }
        match (self, model.parameter_space()) {
            (Estimator::Degenerate(spec), ParameterSpace::Finite(k)) => {
                Ok(Some(spec.width() * k as f64))
            }
            (Estimator::Fiducial(spec), ParameterSpace::RealLine) => {
                let (_, sigma) = model.normal_params(theta)?;
                if spec.alpha() == spec.beta() {
                    return Ok(Some(0.0));
                }
                Ok(Some(
                    sigma
                        * (std_normal_quantile(spec.beta().value())
                            - std_normal_quantile(spec.alpha().value())),
                ))
            }
            _ => Ok(None),
        }
    }
}

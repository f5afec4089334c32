//! Coverage, expected region size and dominance of region estimators, each
//! by exact acceptance-set masses where available and by seeded Monte
//! Carlo. Also hosts the end-to-end two-point counterexample.

mod bayes_study;
mod counterexample;
mod dominance;
mod estimator;
mod mc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelKind, ParamPoint, TwoPointGaussianModel};
use crate::numfmt::{f64_str, opt_f64_str};
use crate::regions::{check_counterexample_delta, fiducial_acceptance_sets};
use crate::specfun::{Prob, RandomStream};

pub use bayes_study::{
    bayes_miscoverage_study, flat_prior_miscoverage_study, MiscoverageEntry, MiscoverageReport,
};
pub use counterexample::{
    analytic_summary, reproduce_counterexample, AnalyticSummary, Check, CounterexampleReport,
    EstimatorSummary, ReportStatus,
};
pub use dominance::{dominance, DominanceMargin, DominanceVerdict, ANALYTIC_TOLERANCE};
pub use estimator::{Estimator, EstimatorKind};

/// Monte Carlo estimates further than this many standard errors from the
/// reference value count as a deviation.
pub const MC_SIGMAS: f64 = 4.0;

pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageEntry {
    pub theta: ParamPoint,
    #[serde(with = "f64_str")]
    pub nominal: f64,
    #[serde(with = "opt_f64_str")]
    pub analytic: Option<f64>,
    #[serde(with = "f64_str")]
    pub mc_estimate: f64,
    #[serde(with = "f64_str")]
    pub mc_stderr: f64,
    pub n_samples: u64,
}

impl CoverageEntry {
    /// `|mc - analytic| <= 4 stderr`; vacuous without an analytic value.
    pub fn mc_consistent(&self) -> bool {
        self.analytic
            .is_none_or(|a| within_sigmas(self.mc_estimate, a, self.mc_stderr))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeEntry {
    pub theta: ParamPoint,
    #[serde(with = "opt_f64_str")]
    pub analytic_expected_size: Option<f64>,
    #[serde(with = "f64_str")]
    pub mc_expected_size: f64,
    #[serde(with = "f64_str")]
    pub mc_stderr: f64,
    pub n_samples: u64,
}

impl SizeEntry {
    pub fn mc_consistent(&self) -> bool {
        self.analytic_expected_size
            .is_none_or(|a| within_sigmas(self.mc_expected_size, a, self.mc_stderr))
    }

    /// Analytic size if known, otherwise the Monte Carlo estimate.
    pub fn best(&self) -> f64 {
        self.analytic_expected_size.unwrap_or(self.mc_expected_size)
    }
}

/// `|estimate - reference| <= 4 stderr`. A zero stderr demands equality to
/// within rounding.
pub fn within_sigmas(estimate: f64, reference: f64, stderr: f64) -> bool {
    let diff = (estimate - reference).abs();
    if stderr > 0.0 {
        diff <= MC_SIGMAS * stderr
    } else {
        diff <= 1e-12
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::Validation("sample count n must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_theta(model: &ModelKind, estimator: &Estimator, theta: ParamPoint) -> Result<()> {
    estimator.check_model(model)?;
    use crate::models::Model;
    if !model.parameter_space().contains(theta) {
        return Err(Error::Parameter(format!("{theta:?} is outside the parameter space")));
    }
    Ok(())
}

/// Coverage and expected size from one shared set of draws.
pub fn evaluate(
    model: &ModelKind,
    estimator: &Estimator,
    theta: ParamPoint,
    n: u64,
    stream: &RandomStream,
) -> Result<(CoverageEntry, SizeEntry)> {
    check_n(n)?;
    check_theta(model, estimator, theta)?;
    let tally = mc::simulate(model, estimator, theta, n, stream)?;
    let (cov, cov_se) = tally.coverage();
    let (size, size_se) = tally.size();
    Ok((
        CoverageEntry {
            theta,
            nominal: estimator.nominal(),
            analytic: estimator.analytic_coverage(model, theta)?,
            mc_estimate: cov,
            mc_stderr: cov_se,
            n_samples: n,
        },
        SizeEntry {
            theta,
            analytic_expected_size: estimator.analytic_size(model, theta)?,
            mc_expected_size: size,
            mc_stderr: size_se,
            n_samples: n,
        },
    ))
}

/// Fraction of `y ~ p_θ` whose region contains θ.
pub fn coverage(
    model: &ModelKind,
    estimator: &Estimator,
    theta: ParamPoint,
    n: u64,
    stream: &RandomStream,
) -> Result<CoverageEntry> {
    evaluate(model, estimator, theta, n, stream).map(|(c, _)| c)
}

/// `E_{y|θ} |region(y)|`.
pub fn expected_size(
    model: &ModelKind,
    estimator: &Estimator,
    theta: ParamPoint,
    n: u64,
    stream: &RandomStream,
) -> Result<SizeEntry> {
    evaluate(model, estimator, theta, n, stream).map(|(_, s)| s)
}

/// `μ₀ = P(y ∈ Ω₁ | θ = 0)`.
pub fn mu0(model: &TwoPointGaussianModel, delta: Prob) -> Result<Prob> {
    let rule = fiducial_acceptance_sets(model, delta)?;
    rule.set(1).gaussian_mass(0.0, model.sigma0())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeCheck {
    /// `1 - σ₁Φ⁻¹(δ) < -σ₀Φ⁻¹(δ)`, which forces `Ω₁ ⊂ Ω₀`.
    pub nesting: bool,
    /// `μ₀ < 2δ`.
    pub mass_condition: bool,
}

impl RegimeCheck {
    pub fn holds(&self) -> bool {
        self.nesting && self.mass_condition
    }
}

pub fn regime_check(model: &TwoPointGaussianModel, delta: Prob) -> Result<RegimeCheck> {
    check_counterexample_delta(delta)?;
    let z = crate::specfun::gaussian_quantile(delta)?;
    let nesting = 1.0 - model.sigma1() * z < -model.sigma0() * z;
    let mass_condition = mu0(model, delta)?.value() < 2.0 * delta.value();
    Ok(RegimeCheck {
        nesting,
        mass_condition,
    })
}

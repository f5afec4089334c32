use serde::{Deserialize, Serialize};

use super::{check_n, evaluate, CoverageEntry, Estimator, MC_SIGMAS};
use crate::error::{Error, Result};
use crate::models::{GaussianLocationModel, ModelKind, ParamPoint, TwoPointGaussianModel};
use crate::numfmt::{f64_str, opt_f64_str};
use crate::regions::RegionSpec;
use crate::specfun::{Prob, RandomStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiscoverageEntry {
    pub coverage: CoverageEntry,
    /// `mc_estimate - level`.
    #[serde(with = "f64_str")]
    pub deviation: f64,
    /// `|deviation| > 4 stderr`.
    pub flagged: bool,
}

/// Frequentist coverage, per θ, of a credible region built under an assumed
/// prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiscoverageReport {
    pub estimator: String,
    #[serde(with = "f64_str")]
    pub level: f64,
    #[serde(with = "opt_f64_str")]
    pub assumed_prior1: Option<f64>,
    #[serde(with = "opt_f64_str")]
    pub true_prior1: Option<f64>,
    pub entries: Vec<MiscoverageEntry>,
    /// Coverage averaged over θ under the true prior.
    #[serde(with = "opt_f64_str")]
    pub prior_averaged_coverage: Option<f64>,
    #[serde(with = "opt_f64_str")]
    pub prior_averaged_stderr: Option<f64>,
    pub any_flagged: bool,
}

fn entry(coverage: CoverageEntry, level: f64) -> MiscoverageEntry {
    let deviation = coverage.mc_estimate - level;
    let flagged = deviation.abs() > MC_SIGMAS * coverage.mc_stderr;
    MiscoverageEntry {
        coverage,
        deviation,
        flagged,
    }
}

/// Two-point study: the credible region uses `assumed_prior1` while θ is
/// really drawn with `P(θ=1) = true_prior1`. θ = j draws from
/// `RandomStream::new(seed).fork(j)`.
pub fn bayes_miscoverage_study(
    model: &TwoPointGaussianModel,
    true_prior1: Prob,
    assumed_prior1: Prob,
    level: Prob,
    n: u64,
    seed: u64,
) -> Result<MiscoverageReport> {
    check_n(n)?;
    let kind: ModelKind = (*model).into();
    let est = Estimator::Bayes {
        prior1: assumed_prior1,
        level,
    };
    let base = RandomStream::new(seed);
    let mut entries = Vec::with_capacity(2);
    for j in 0..2 {
        let (c, _) = evaluate(&kind, &est, ParamPoint::Label(j), n, &base.fork(j as u64))?;
        entries.push(entry(c, level.value()));
    }
    let weights = [true_prior1.complement().value(), true_prior1.value()];
    let avg: f64 = entries
        .iter()
        .zip(weights)
        .map(|(e, w)| w * e.coverage.mc_estimate)
        .sum();
    let avg_se = entries
        .iter()
        .zip(weights)
        .map(|(e, w)| (w * e.coverage.mc_stderr).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(MiscoverageReport {
        estimator: est.name().into(),
        level: level.value(),
        assumed_prior1: Some(assumed_prior1.value()),
        true_prior1: Some(true_prior1.value()),
        any_flagged: entries.iter().any(|e| e.flagged),
        entries,
        prior_averaged_coverage: Some(avg),
        prior_averaged_stderr: Some(avg_se),
    })
}

/// Location-family study for the flat-prior credible interval with the
/// central band `((1-level)/2, (1+level)/2)`.
pub fn flat_prior_miscoverage_study(
    model: &GaussianLocationModel,
    level: Prob,
    thetas: &[f64],
    n: u64,
    seed: u64,
) -> Result<MiscoverageReport> {
    check_n(n)?;
    if thetas.is_empty() {
        return Err(Error::Validation("need at least one θ".into()));
    }
    let lv = level.value();
    let spec = RegionSpec::from_values(0.5 * (1.0 - lv), 0.5 * (1.0 + lv))?;
    let est = Estimator::FlatPrior(spec);
    let kind: ModelKind = (*model).into();
    let base = RandomStream::new(seed);
    let mut entries = Vec::with_capacity(thetas.len());
    for (j, &t) in thetas.iter().enumerate() {
        let (c, _) = evaluate(&kind, &est, ParamPoint::Location(t), n, &base.fork(j as u64))?;
        entries.push(entry(c, lv));
    }
    Ok(MiscoverageReport {
        estimator: est.name().into(),
        level: lv,
        assumed_prior1: None,
        true_prior1: None,
        any_flagged: entries.iter().any(|e| e.flagged),
        entries,
        prior_averaged_coverage: None,
        prior_averaged_stderr: None,
    })
}

use super::{ParamRegion, RealSet, RegionSpec};
use crate::error::{Error, Result};
use crate::models::{GaussianLocationModel, Model, ParamPoint, TwoPointGaussianModel};
use crate::specfun::{std_normal_quantile, Prob};

/// `(P(θ=0 | y), P(θ=1 | y))`, each from its own log-odds so neither is
/// formed as `1 - other`.
fn posterior_pair(model: &TwoPointGaussianModel, prior1: Prob, y: f64) -> Result<(f64, f64)> {
    let l0 = prior1.complement().value().ln() + model.log_density(ParamPoint::Label(0), y)?;
    let l1 = prior1.value().ln() + model.log_density(ParamPoint::Label(1), y)?;
    if l0.is_nan() || l1.is_nan() || (l0 == f64::NEG_INFINITY && l1 == f64::NEG_INFINITY) {
        return Err(Error::DegenerateEvidence { y });
    }
    Ok((logistic(l0 - l1), logistic(l1 - l0)))
}

/// `1 / (1 + exp(-t))` without overflow.
fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `P(θ=1 | y)` under prior mass `prior1` on θ=1.
pub fn bayes_posterior(model: &TwoPointGaussianModel, prior1: Prob, y: f64) -> Result<Prob> {
    let (_, p1) = posterior_pair(model, prior1, y)?;
    Ok(Prob::saturating(p1))
}

/// Highest-posterior set: labels in decreasing posterior order (ties to the
/// lower label) until the accumulated posterior reaches `level`.
pub fn bayes_credible_region(
    model: &TwoPointGaussianModel,
    prior1: Prob,
    level: Prob,
    y: f64,
) -> Result<ParamRegion> {
    let lv = level.value();
    if !(lv > 0.0 && lv < 1.0) {
        return Err(Error::Validation(format!("level must lie in (0, 1), got {lv}")));
    }
    let (p0, p1) = posterior_pair(model, prior1, y)?;
    let order: [(usize, f64); 2] = if p1 > p0 { [(1, p1), (0, p0)] } else { [(0, p0), (1, p1)] };
    let mut included = [false; 2];
    let mut cumulative = 0.0;
    for (label, post) in order {
        included[label] = true;
        cumulative += post;
        if cumulative >= lv {
            break;
        }
    }
    Ok(ParamRegion::from_membership(&included))
}

/// Credible interval under a flat prior, whose posterior is `N(y, σ²)`.
///
/// Returns the θ whose posterior upper-tail probability `P(Θ > θ | y)` lies in
/// `(alpha, beta)`, i.e. `(y + σΦ⁻¹(1-β), y + σΦ⁻¹(1-α))`. This is the band
/// orientation of the pivot `U(y; θ) = P_θ(Y <= y)`, which equals that tail.
pub fn flat_prior_location_interval(
    model: &GaussianLocationModel,
    spec: &RegionSpec,
    y: f64,
) -> Result<ParamRegion> {
    if spec.alpha() == spec.beta() {
        return Err(Error::Validation(
            "flat-prior interval needs alpha < beta".into(),
        ));
    }
    if !y.is_finite() {
        return Err(Error::Domain(format!("observation must be finite, got {y}")));
    }
    let sigma = model.sigma();
    let lo = y + sigma * std_normal_quantile(1.0 - spec.beta().value());
    let hi = y + sigma * std_normal_quantile(1.0 - spec.alpha().value());
    Ok(ParamRegion::Continuous(RealSet::interval(lo, hi)?))
}

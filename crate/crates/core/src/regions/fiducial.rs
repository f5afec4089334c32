use super::{check_counterexample_delta, AcceptanceRule, ParamRegion, RealSet, RegionSpec};
use crate::error::{Error, Result};
use crate::models::{Model, ParamPoint, ParameterSpace, TwoPointGaussianModel};
use crate::specfun::{std_normal_quantile, Prob};

/// `I_{α,β}(y) = {θ : α < U(y; θ) < β}` with `U(y; θ) = P_θ(Y <= y)`.
///
/// For the location family the set is the θ-interval
/// `(y - σΦ⁻¹(β), y - σΦ⁻¹(α))`.
pub fn fiducial_region(model: &dyn Model, spec: &RegionSpec, y: f64) -> Result<ParamRegion> {
    match model.parameter_space() {
        ParameterSpace::Finite(k) => {
            let mut included = Vec::with_capacity(k);
            for i in 0..k {
                let u = model.cdf(ParamPoint::Label(i), y)?;
                included.push(spec.admits(u.value()));
            }
            Ok(ParamRegion::from_membership(&included))
        }
        ParameterSpace::RealLine => {
            if !y.is_finite() {
                return Err(Error::Domain(format!("observation must be finite, got {y}")));
            }
            if spec.alpha() == spec.beta() {
                return Ok(ParamRegion::Continuous(RealSet::empty()));
            }
            // sigma does not depend on θ for a location family
            let (_, sigma) = model.normal_params(ParamPoint::Location(0.0))?;
            let lo = y - sigma * std_normal_quantile(spec.beta().value());
            let hi = y - sigma * std_normal_quantile(spec.alpha().value());
            Ok(ParamRegion::Continuous(RealSet::interval(lo, hi)?))
        }
    }
}

/// Acceptance sets `Ω_i = (q_i(α), q_i(β))` of the fiducial band on any
/// finite-space model; `q_i(0) = -∞`, `q_i(1) = +∞`.
pub fn fiducial_acceptance_rule(model: &dyn Model, spec: &RegionSpec) -> Result<AcceptanceRule> {
    let k = match model.parameter_space() {
        ParameterSpace::Finite(k) => k,
        ParameterSpace::RealLine => {
            return Err(Error::Parameter(
                "acceptance sets need a finite parameter space".into(),
            ))
        }
    };
    let mut sets = Vec::with_capacity(k);
    for i in 0..k {
        if spec.alpha() == spec.beta() {
            sets.push(RealSet::empty());
            continue;
        }
        let (mean, sigma) = model.normal_params(ParamPoint::Label(i))?;
        let lo = mean + sigma * std_normal_quantile(spec.alpha().value());
        let hi = mean + sigma * std_normal_quantile(spec.beta().value());
        sets.push(RealSet::interval(lo, hi)?);
    }
    Ok(AcceptanceRule::new(sets))
}

/// `Ω₀ = (σ₀Φ⁻¹(δ), -σ₀Φ⁻¹(δ))` and `Ω₁ = (1 + σ₁Φ⁻¹(δ), 1 - σ₁Φ⁻¹(δ))`.
pub fn fiducial_acceptance_sets(
    model: &TwoPointGaussianModel,
    delta: Prob,
) -> Result<AcceptanceRule> {
    check_counterexample_delta(delta)?;
    let z = std_normal_quantile(delta.value());
    let omega0 = RealSet::interval(model.sigma0() * z, -model.sigma0() * z)?;
    let omega1 = RealSet::interval(1.0 + model.sigma1() * z, 1.0 - model.sigma1() * z)?;
    Ok(AcceptanceRule::new(vec![omega0, omega1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::GaussianLocationModel;
    use crate::regions::rule_region;

    fn p(v: f64) -> Prob {
        Prob::new(v).unwrap()
    }

    #[test]
    fn full_band_gives_full_space() {
        let m = TwoPointGaussianModel::new(1.0, 0.01).unwrap();
        let spec = RegionSpec::from_values(0.0, 1.0).unwrap();
        for &y in &[-100.0, 0.0, 1.0, 40.0] {
            assert_eq!(fiducial_region(&m, &spec, y).unwrap().size(), 2.0);
        }
        let loc = GaussianLocationModel::new(1.0).unwrap();
        assert_eq!(
            fiducial_region(&loc, &spec, 3.0).unwrap(),
            ParamRegion::Continuous(RealSet::real_line())
        );
    }

    #[test]
    fn two_point_memberships() {
        let m = TwoPointGaussianModel::new(1.0, 1.0).unwrap();
        let spec = RegionSpec::from_delta(p(0.1)).unwrap();
        assert!(fiducial_region(&m, &spec, 0.0).unwrap().contains(ParamPoint::Label(0)));

        // Φ(1/10) and Φ(0) both in (0.05, 0.95)
        let m = TwoPointGaussianModel::new(10.0, 0.1).unwrap();
        let spec = RegionSpec::from_delta(p(0.05)).unwrap();
        let r = fiducial_region(&m, &spec, 1.0).unwrap();
        assert_eq!(r, ParamRegion::Finite { space_size: 2, labels: vec![0, 1] });
    }

    #[test]
    fn closed_form_sets_match_generic_rule() {
        let m = TwoPointGaussianModel::new(1.0, 0.4).unwrap();
        let rule = fiducial_acceptance_sets(&m, p(0.05)).unwrap();
        let o0 = rule.set(0).intervals()[0];
        assert!((o0.lo + 1.644_853_626_951_472_7).abs() < 1e-14);
        assert_eq!(o0.lo, -o0.hi);
        let o1 = rule.set(1).intervals()[0];
        assert!(((o1.lo + o1.hi) / 2.0 - 1.0).abs() < 1e-15);

        let generic =
            fiducial_acceptance_rule(&m, &RegionSpec::from_delta(p(0.05)).unwrap()).unwrap();
        for i in 0..2 {
            let (a, b) = (rule.set(i).intervals()[0], generic.set(i).intervals()[0]);
            assert!((a.lo - b.lo).abs() < 1e-14 && (a.hi - b.hi).abs() < 1e-14);
        }
    }

    #[test]
    fn rule_and_pivot_agree() {
        let m = TwoPointGaussianModel::new(2.0, 0.3).unwrap();
        let spec = RegionSpec::from_delta(p(0.1)).unwrap();
        let rule = fiducial_acceptance_rule(&m, &spec).unwrap();
        for i in -400..400 {
            let y = i as f64 * 0.0173;
            assert_eq!(rule_region(&rule, y), fiducial_region(&m, &spec, y).unwrap(), "y={y}");
        }
    }

    #[test]
    fn nesting_in_counterexample_regime() {
        let m = TwoPointGaussianModel::new(10.0, 0.1).unwrap();
        let rule = fiducial_acceptance_sets(&m, p(0.05)).unwrap();
        assert!(rule.set(1).is_subset_of(rule.set(0)));
        assert!(fiducial_acceptance_sets(&m, p(0.25)).is_err());
    }

    #[test]
    fn location_interval() {
        let loc = GaussianLocationModel::new(2.0).unwrap();
        let spec = RegionSpec::from_values(0.025, 0.975).unwrap();
        match fiducial_region(&loc, &spec, 1.0).unwrap() {
            ParamRegion::Continuous(s) => {
                let iv = s.intervals()[0];
                assert!((iv.lo - (1.0 - 2.0 * 1.959_963_984_540_054)).abs() < 1e-12);
                assert!((iv.hi - (1.0 + 2.0 * 1.959_963_984_540_054)).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let empty = RegionSpec::from_values(0.5, 0.5).unwrap();
        assert!(fiducial_region(&loc, &empty, 0.0).unwrap().is_empty());
    }
}

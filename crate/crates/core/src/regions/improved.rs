use super::{fiducial_acceptance_sets, AcceptanceRule, Interval, RealSet};
use crate::error::{Error, Result};
use crate::specfun::{std_normal_cdf, std_normal_quantile, std_normal_sf, Prob};
use crate::models::TwoPointGaussianModel;

/// Acceptance sets `{Ω₀′, Ω₁}` of an estimator with the same coverage as the
/// fiducial one, but with `Ω₀′ ∩ Ω₁ = ∅`, so every region has at most one
/// label.
///
/// `Ω₀′` is `Ω₀ \ Ω₁` plus the θ=0 mass lost to the overlap, added back as
/// tail extensions, half per tail in probability. A tail whose outward
/// extension would run into `Ω₁` (because `Ω₁` sticks out of `Ω₀` on that
/// side) hands its share to the opposite tail; anything the opposite tail
/// cannot absorb goes beyond the far edge of `Ω₁`.
///
/// Requires `μ₀ = P(y ∈ Ω₁ | θ=0) < 2δ`.
pub fn improved_acceptance_sets(
    model: &TwoPointGaussianModel,
    delta: Prob,
) -> Result<AcceptanceRule> {
    let fiducial = fiducial_acceptance_sets(model, delta)?;
    let (omega0, omega1) = (fiducial.set(0), fiducial.set(1));
    let s0 = model.sigma0();
    let d = delta.value();

    let mu0 = omega1.gaussian_mass(0.0, s0)?.value();
    if !(mu0 < 2.0 * d) {
        return Err(Error::Infeasible {
            mu0,
            two_delta: 2.0 * d,
        });
    }

    let overlap = omega0.intersection(omega1);
    let missing = overlap.gaussian_mass(0.0, s0)?.value();
    if overlap.is_empty() || missing == 0.0 {
        return Ok(fiducial);
    }

    let o0 = omega0.intervals()[0];
    let o1 = omega1.intervals()[0];
    let left_contiguous = o1.lo >= o0.lo;
    let right_contiguous = o1.hi <= o0.hi;
    let left_edge = o0.lo.min(o1.lo);
    let right_edge = o0.hi.max(o1.hi);
    // free θ=0 mass beyond the outer edges of Ω₀ ∪ Ω₁
    let left_cap = std_normal_cdf(left_edge / s0);
    let right_cap = std_normal_sf(right_edge / s0);

    let (take_left, take_right) = match (left_contiguous, right_contiguous) {
        (true, false) => {
            let l = missing.min(left_cap);
            (l, missing - l)
        }
        (false, true) => {
            let r = missing.min(right_cap);
            (missing - r, r)
        }
        _ => (0.5 * missing, 0.5 * missing),
    };
    if take_left > left_cap || take_right > right_cap {
        return Err(Error::Infeasible {
            mu0,
            two_delta: 2.0 * d,
        });
    }

    // New outer endpoints: the tail beyond each keeps `cap - take` mass.
    let new_lo = s0 * std_normal_quantile(left_cap - take_left);
    let new_hi = -s0 * std_normal_quantile(right_cap - take_right);

    let mut extras = Vec::new();
    let lo = if left_contiguous {
        new_lo
    } else {
        if take_left > 0.0 {
            extras.push(Interval::new(new_lo, left_edge)?);
        }
        o0.lo
    };
    let hi = if right_contiguous {
        new_hi
    } else {
        if take_right > 0.0 {
            extras.push(Interval::new(right_edge, new_hi)?);
        }
        o0.hi
    };

    let omega0_prime = RealSet::interval(lo, hi)?
        .difference(omega1)
        .union(&RealSet::from_intervals(extras));
    debug_assert!(omega0_prime.is_disjoint(omega1));
    Ok(AcceptanceRule::new(vec![omega0_prime, omega1.clone()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::rule_region;

    fn p(v: f64) -> Prob {
        Prob::new(v).unwrap()
    }

    fn mass0(model: &TwoPointGaussianModel, set: &RealSet) -> f64 {
        set.gaussian_mass(0.0, model.sigma0()).unwrap().value()
    }

    #[test]
    fn reference_configuration() {
        let m = TwoPointGaussianModel::new(10.0, 0.1).unwrap();
        let rule = improved_acceptance_sets(&m, p(0.05)).unwrap();
        assert!((mass0(&m, rule.set(0)) - 0.9).abs() <= 1e-10);
        assert!(rule.set(0).is_disjoint(rule.set(1)));
        // Ω₀′ = (L, b1) ∪ (b2, -L)
        assert_eq!(rule.set(0).intervals().len(), 2);
        let iv = rule.set(0).intervals();
        assert!((iv[0].lo + iv[1].hi).abs() < 1e-9);
        for i in -5000..5000 {
            assert!(rule_region(&rule, i as f64 * 0.01).size() <= 1.0);
        }
    }

    #[test]
    fn disjoint_case_keeps_omega0() {
        // Ω₀ = (-0.16, 0.16), Ω₁ = (0.84, 1.16)
        let m = TwoPointGaussianModel::new(0.1, 0.1).unwrap();
        let fid = fiducial_acceptance_sets(&m, p(0.05)).unwrap();
        let imp = improved_acceptance_sets(&m, p(0.05)).unwrap();
        assert_eq!(fid, imp);
    }

    #[test]
    fn partial_overlap_routes_to_left_tail() {
        // Ω₀ = (-1.645, 1.645), Ω₁ = (0.67, 1.33): nested; widen σ₁ to stick out
        let m = TwoPointGaussianModel::new(1.0, 0.6).unwrap();
        let delta = p(0.2);
        let fid = fiducial_acceptance_sets(&m, delta).unwrap();
        assert!(fid.set(1).intervals()[0].hi > fid.set(0).intervals()[0].hi);
        match improved_acceptance_sets(&m, delta) {
            Ok(rule) => {
                assert!((mass0(&m, rule.set(0)) - 0.6).abs() <= 1e-10);
                assert!(rule.set(0).is_disjoint(rule.set(1)));
            }
            Err(Error::Infeasible { mu0, two_delta }) => assert!(mu0 >= two_delta),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn infeasible_when_mu0_large() {
        let m = TwoPointGaussianModel::new(1.0, 1.0).unwrap();
        assert!(matches!(
            improved_acceptance_sets(&m, p(0.05)),
            Err(Error::Infeasible { .. })
        ));
    }
}

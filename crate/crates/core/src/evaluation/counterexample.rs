use serde::{Deserialize, Serialize};

use super::{
    check_n, dominance, evaluate, mu0, regime_check, within_sigmas, CoverageEntry,
    DominanceVerdict, Estimator, RegimeCheck, SizeEntry, ANALYTIC_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::models::{ModelKind, ParamPoint, TwoPointGaussianModel};
use crate::numfmt::{f64_str, fmt17};
use crate::regions::{fiducial_acceptance_sets, RealSet, RegionSpec};
use crate::specfun::{Prob, RandomStream};

const THETAS: [ParamPoint; 2] = [ParamPoint::Label(0), ParamPoint::Label(1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Verified,
    VerificationFailed,
    OutsideRegime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub name: String,
    pub coverage: Vec<CoverageEntry>,
    pub size: Vec<SizeEntry>,
}

/// Exact quantities of the two-point construction at one `(σ₀, σ₁, δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSummary {
    #[serde(with = "f64_str")]
    pub sigma0: f64,
    #[serde(with = "f64_str")]
    pub sigma1: f64,
    #[serde(with = "f64_str")]
    pub delta: f64,
    #[serde(with = "f64_str")]
    pub mu0: f64,
    pub regime: RegimeCheck,
    pub omega0: RealSet,
    pub omega1: RealSet,
    /// Absent when the improved sets cannot be built (`μ₀ >= 2δ`).
    pub omega0_prime: Option<RealSet>,
    /// `E_{y|θ}|I(y)|` for θ = 0, 1.
    pub fiducial_size: [SizeValue; 2],
    pub improved_size: Option<[SizeValue; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SizeValue(#[serde(with = "f64_str")] pub f64);

pub fn analytic_summary(
    sigma0: f64,
    sigma1: f64,
    delta: Prob,
) -> Result<AnalyticSummary> {
    let model = TwoPointGaussianModel::new(sigma0, sigma1)?;
    let kind: ModelKind = model.into();
    let regime = regime_check(&model, delta)?;
    let fid = fiducial_acceptance_sets(&model, delta)?;
    let fid_est = Estimator::Fiducial(RegionSpec::from_delta(delta)?);
    let improved = match Estimator::improved(&model, delta) {
        Ok(est) => Some(est),
        Err(Error::Infeasible { .. }) => None,
        Err(e) => return Err(e),
    };
    let sizes = |est: &Estimator| -> Result<[SizeValue; 2]> {
        let s0 = est.analytic_size(&kind, THETAS[0])?.expect("rule-based size");
        let s1 = est.analytic_size(&kind, THETAS[1])?.expect("rule-based size");
        Ok([SizeValue(s0), SizeValue(s1)])
    };
    Ok(AnalyticSummary {
        sigma0,
        sigma1,
        delta: delta.value(),
        mu0: mu0(&model, delta)?.value(),
        regime,
        omega0: fid.set(0).clone(),
        omega1: fid.set(1).clone(),
        omega0_prime: improved
            .as_ref()
            .and_then(|e| e.acceptance_rule(&kind).ok().flatten())
            .map(|r| r.set(0).clone()),
        fiducial_size: sizes(&fid_est)?,
        improved_size: improved.as_ref().map(sizes).transpose()?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub status: ReportStatus,
    pub n: u64,
    pub seed: u64,
    pub analytic: AnalyticSummary,
    pub estimators: Vec<EstimatorSummary>,
    /// Improved (A) against fiducial (B).
    pub dominance: Option<DominanceVerdict>,
    pub checks: Vec<Check>,
}

impl CounterexampleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn estimator(&self, name: &str) -> Option<&EstimatorSummary> {
        self.estimators.iter().find(|e| e.name == name)
    }
}

/// Runs the two-point suboptimality example: acceptance sets, coverage and
/// sizes of the fiducial, improved and degenerate estimators, the size
/// inequalities at θ = 1, and the dominance verdict.
///
/// θ = j draws from `RandomStream::new(seed).fork(j)` for every estimator.
pub fn reproduce_counterexample(
    sigma0: f64,
    sigma1: f64,
    delta: Prob,
    n: u64,
    seed: u64,
) -> Result<CounterexampleReport> {
    check_n(n)?;
    let analytic = analytic_summary(sigma0, sigma1, delta)?;
    if !analytic.regime.holds() {
        return Ok(CounterexampleReport {
            status: ReportStatus::OutsideRegime,
            n,
            seed,
            analytic,
            estimators: Vec::new(),
            dominance: None,
            checks: Vec::new(),
        });
    }

    let model = TwoPointGaussianModel::new(sigma0, sigma1)?;
    let kind: ModelKind = model.into();
    let d = delta.value();
    let target = 1.0 - 2.0 * d;
    let band = RegionSpec::from_delta(delta)?;
    let fiducial = Estimator::Fiducial(band);
    let improved = Estimator::improved(&model, delta)?;
    let degenerate = Estimator::Degenerate(band);
    let base = RandomStream::new(seed);

    let mut estimators = Vec::new();
    for est in [&fiducial, &improved, &degenerate] {
        let mut coverage = Vec::new();
        let mut size = Vec::new();
        for (j, &theta) in THETAS.iter().enumerate() {
            let (c, s) = evaluate(&kind, est, theta, n, &base.fork(j as u64))?;
            coverage.push(c);
            size.push(s);
        }
        estimators.push(EstimatorSummary {
            name: est.name().to_string(),
            coverage,
            size,
        });
    }
    let verdict = dominance(&kind, &improved, &fiducial, &THETAS, n, &base)?;

    let mut checks = Vec::new();
    let omega0_prime = analytic.omega0_prime.as_ref().expect("regime holds");
    checks.push(Check::new(
        "omega1_subset_omega0",
        analytic.omega1.is_subset_of(&analytic.omega0),
        "interval algebra".into(),
    ));
    checks.push(Check::new(
        "mu0_below_two_delta",
        analytic.mu0 < 2.0 * d,
        format!("mu0 = {} < {}", fmt17(analytic.mu0), fmt17(2.0 * d)),
    ));
    checks.push(Check::new(
        "improved_sets_disjoint",
        omega0_prime.is_disjoint(&analytic.omega1),
        "omega0' and omega1 share no point".into(),
    ));

    for summary in &estimators {
        for c in &summary.coverage {
            let analytic_ok = c
                .analytic
                .is_some_and(|a| (a - target).abs() <= ANALYTIC_TOLERANCE);
            checks.push(Check::new(
                &format!("{}_coverage_analytic_theta{}", summary.name, c.theta),
                analytic_ok,
                format!("analytic {:?} vs {}", c.analytic.map(fmt17), fmt17(target)),
            ));
            checks.push(Check::new(
                &format!("{}_coverage_mc_theta{}", summary.name, c.theta),
                within_sigmas(c.mc_estimate, target, c.mc_stderr),
                format!("mc {} +- {}", fmt17(c.mc_estimate), fmt17(c.mc_stderr)),
            ));
        }
        for s in &summary.size {
            checks.push(Check::new(
                &format!("{}_size_mc_theta{}", summary.name, s.theta),
                s.mc_consistent(),
                format!(
                    "mc {} +- {} vs analytic {:?}",
                    fmt17(s.mc_expected_size),
                    fmt17(s.mc_stderr),
                    s.analytic_expected_size.map(fmt17)
                ),
            ));
        }
    }

    let fid_sizes = &estimators[0].size;
    let imp_sizes = &estimators[1].size;
    let e1_fid = analytic.fiducial_size[1].0;
    let e1_fid_mc = fid_sizes[1].mc_expected_size;
    checks.push(Check::new(
        "fiducial_size_theta1_exceeds_2(1-2delta)",
        e1_fid > 2.0 * target,
        format!("{} > {}", fmt17(e1_fid), fmt17(2.0 * target)),
    ));
    checks.push(Check::new(
        "2(1-2delta)_exceeds_one",
        2.0 * target > 1.0,
        format!("{} > 1", fmt17(2.0 * target)),
    ));
    checks.push(Check::new(
        "fiducial_size_theta1_mc_exceeds_one",
        e1_fid_mc > 1.0,
        format!("{} > 1", fmt17(e1_fid_mc)),
    ));
    let imp = analytic.improved_size.expect("regime holds");
    checks.push(Check::new(
        "improved_size_theta1_at_most_one",
        imp[1].0 <= 1.0 && imp_sizes[1].mc_expected_size <= 1.0,
        format!(
            "analytic {} mc {}",
            fmt17(imp[1].0),
            fmt17(imp_sizes[1].mc_expected_size)
        ),
    ));
    let e0_expected = target + analytic.mu0;
    checks.push(Check::new(
        "size_theta0_equals_1-2delta+mu0",
        (analytic.fiducial_size[0].0 - e0_expected).abs() <= ANALYTIC_TOLERANCE
            && (imp[0].0 - e0_expected).abs() <= ANALYTIC_TOLERANCE,
        format!(
            "fiducial {} improved {} expected {}",
            fmt17(analytic.fiducial_size[0].0),
            fmt17(imp[0].0),
            fmt17(e0_expected)
        ),
    ));
    checks.push(Check::new(
        "improved_dominates_fiducial",
        verdict.dominates(),
        format!(
            "no_larger_everywhere={} strictly_smaller_somewhere={}",
            verdict.weakly_no_larger_everywhere, verdict.strictly_smaller_somewhere
        ),
    ));

    let status = if checks.iter().all(|c| c.passed) {
        ReportStatus::Verified
    } else {
        ReportStatus::VerificationFailed
    };
    Ok(CounterexampleReport {
        status,
        n,
        seed,
        analytic,
        estimators,
        dominance: Some(verdict),
        checks,
    })
}

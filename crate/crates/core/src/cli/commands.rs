use serde::{Deserialize, Serialize};

use super::config::{CommandKind, ExperimentConfig, SweepAxis};
use super::CliError;
use crate::evaluation::{
    analytic_summary, evaluate, reproduce_counterexample, AnalyticSummary, CounterexampleReport,
    DominanceVerdict, EstimatorSummary,
};
use crate::models::ModelKind;
use crate::specfun::{Prob, RandomStream};

fn to_cli(e: crate::Error) -> CliError {
    match e {
        crate::Error::Infeasible { .. } => CliError::Regime(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseDominance {
    /// Candidate that should be no larger.
    pub a: String,
    pub b: String,
    pub verdict: DominanceVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub command: String,
    pub config: ExperimentConfig,
    pub results: Vec<EstimatorSummary>,
    pub dominance: Vec<PairwiseDominance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceReport {
    pub command: String,
    pub config: ExperimentConfig,
    pub result: CounterexampleReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub command: String,
    pub config: ExperimentConfig,
    pub axis: SweepAxis,
    pub rows: Vec<AnalyticSummary>,
}

/// θ number `j` uses `RandomStream::new(seed).fork(j)` for every estimator,
/// so size comparisons run on common draws.
pub fn run_eval(config: &ExperimentConfig) -> Result<EvalReport, CliError> {
    let model: ModelKind = config.model.build().map_err(to_cli)?;
    let estimators = config
        .estimators
        .iter()
        .map(|e| config.build_estimator(e, &model))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(to_cli)?;
    let base = RandomStream::new(config.seed);

    let mut results = Vec::with_capacity(estimators.len());
    for est in &estimators {
        let mut coverage = Vec::with_capacity(config.thetas.len());
        let mut size = Vec::with_capacity(config.thetas.len());
        for (j, &theta) in config.thetas.iter().enumerate() {
            let (c, s) =
                evaluate(&model, est, theta, config.n, &base.fork(j as u64)).map_err(to_cli)?;
            coverage.push(c);
            size.push(s);
        }
        results.push(EstimatorSummary {
            name: est.name().to_string(),
            coverage,
            size,
        });
    }

    let mut dominance = Vec::new();
    for (i, a) in results.iter().enumerate() {
        for (j, b) in results.iter().enumerate() {
            if i != j {
                dominance.push(PairwiseDominance {
                    a: a.name.clone(),
                    b: b.name.clone(),
                    verdict: DominanceVerdict::from_sizes(&a.size, &b.size),
                });
            }
        }
    }

    Ok(EvalReport {
        command: CommandKind::Eval.as_str().into(),
        config: config.clone(),
        results,
        dominance,
    })
}

fn two_point_sigmas(config: &ExperimentConfig) -> Result<(f64, f64), CliError> {
    match config.model {
        super::config::ModelSpec::TwoPoint { sigma0, sigma1 } => Ok((sigma0, sigma1)),
        _ => Err(CliError::Usage("command needs the two-point model".into())),
    }
}

fn config_delta(config: &ExperimentConfig) -> Result<Prob, CliError> {
    let d = config
        .band
        .delta()
        .ok_or_else(|| CliError::Usage("a symmetric band (delta) is required".into()))?;
    Prob::new(d).map_err(to_cli)
}

pub fn run_reproduce(config: &ExperimentConfig) -> Result<ReproduceReport, CliError> {
    let (sigma0, sigma1) = two_point_sigmas(config)?;
    let delta = config_delta(config)?;
    let result =
        reproduce_counterexample(sigma0, sigma1, delta, config.n, config.seed).map_err(to_cli)?;
    Ok(ReproduceReport {
        command: CommandKind::Reproduce.as_str().into(),
        config: config.clone(),
        result,
    })
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepReport, CliError> {
    let (sigma0, sigma1) = two_point_sigmas(config)?;
    let delta = config_delta(config)?;
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("sweep settings missing".into()))?;
    let rows = sweep
        .values
        .iter()
        .map(|v| {
            let (s0, s1, d) = match sweep.axis {
                SweepAxis::Delta => (sigma0, sigma1, Prob::new(v.0)?),
                SweepAxis::Sigma0 => (v.0, sigma1, delta),
                SweepAxis::Sigma1 => (sigma0, v.0, delta),
            };
            analytic_summary(s0, s1, d)
        })
        .collect::<crate::Result<Vec<_>>>()
        .map_err(to_cli)?;
    Ok(SweepReport {
        command: CommandKind::Sweep.as_str().into(),
        config: config.clone(),
        axis: sweep.axis,
        rows,
    })
}

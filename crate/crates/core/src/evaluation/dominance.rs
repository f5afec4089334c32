use serde::{Deserialize, Serialize};

use super::{evaluate, Estimator, SizeEntry, MC_SIGMAS};
use crate::error::Result;
use crate::models::{ModelKind, ParamPoint};
use crate::numfmt::f64_str;
use crate::specfun::RandomStream;

/// Exact comparisons of analytic sizes use this slack.
pub const ANALYTIC_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceMargin {
    pub theta: ParamPoint,
    #[serde(with = "f64_str")]
    pub size_a: f64,
    #[serde(with = "f64_str")]
    pub size_b: f64,
    /// `size_b - size_a`; positive when A is smaller.
    #[serde(with = "f64_str")]
    pub margin: f64,
    /// Zero when both sizes are analytic.
    #[serde(with = "f64_str")]
    pub stderr: f64,
    pub analytic: bool,
}

impl DominanceMargin {
    fn no_larger(&self) -> bool {
        if self.analytic {
            self.margin >= -ANALYTIC_TOLERANCE
        } else {
            self.margin >= -MC_SIGMAS * self.stderr
        }
    }

    fn strictly_smaller(&self) -> bool {
        if self.analytic {
            self.margin > ANALYTIC_TOLERANCE
        } else {
            self.margin > MC_SIGMAS * self.stderr
        }
    }
}

/// Whether A's expected size is no larger than B's at every θ and smaller at
/// some θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub weakly_no_larger_everywhere: bool,
    pub strictly_smaller_somewhere: bool,
    pub margins: Vec<DominanceMargin>,
}

impl DominanceVerdict {
    pub fn from_margins(margins: Vec<DominanceMargin>) -> Self {
        DominanceVerdict {
            weakly_no_larger_everywhere: margins.iter().all(DominanceMargin::no_larger),
            strictly_smaller_somewhere: margins.iter().any(DominanceMargin::strictly_smaller),
            margins,
        }
    }

    pub fn dominates(&self) -> bool {
        self.weakly_no_larger_everywhere && self.strictly_smaller_somewhere
    }
}

/// Compares expected sizes of A and B at each θ. Uses the analytic values
/// when both estimators have them, otherwise Monte Carlo with the combined
/// standard error. θ number `j` draws from `stream.fork(j)`, shared by A
/// and B.
pub fn dominance(
    model: &ModelKind,
    a: &Estimator,
    b: &Estimator,
    thetas: &[ParamPoint],
    n: u64,
    stream: &RandomStream,
) -> Result<DominanceVerdict> {
    let mut sizes_a = Vec::with_capacity(thetas.len());
    let mut sizes_b = Vec::with_capacity(thetas.len());
    for (j, &theta) in thetas.iter().enumerate() {
        let sub = stream.fork(j as u64);
        sizes_a.push(evaluate(model, a, theta, n, &sub)?.1);
        sizes_b.push(evaluate(model, b, theta, n, &sub)?.1);
    }
    Ok(DominanceVerdict::from_sizes(&sizes_a, &sizes_b))
}

impl DominanceVerdict {
    /// Verdict from per-θ size entries of A and B, paired by position.
    pub fn from_sizes(a: &[SizeEntry], b: &[SizeEntry]) -> Self {
        let margins = a
            .iter()
            .zip(b)
            .map(|(sa, sb)| {
                debug_assert_eq!(sa.theta, sb.theta);
                match (sa.analytic_expected_size, sb.analytic_expected_size) {
                    (Some(x), Some(y)) => DominanceMargin {
                        theta: sa.theta,
                        size_a: x,
                        size_b: y,
                        margin: y - x,
                        stderr: 0.0,
                        analytic: true,
                    },
                    _ => DominanceMargin {
                        theta: sa.theta,
                        size_a: sa.mc_expected_size,
                        size_b: sb.mc_expected_size,
                        margin: sb.mc_expected_size - sa.mc_expected_size,
                        stderr: sa.mc_stderr.hypot(sb.mc_stderr),
                        analytic: false,
                    },
                }
            })
            .collect();
        DominanceVerdict::from_margins(margins)
    }
}

use rayon::prelude::*;

use super::Estimator;
use crate::error::Result;
use crate::models::{Model, ModelKind, ParamPoint};
use crate::specfun::{std_normal_quantile, RandomStream};

/// Samples per work unit. Chunk boundaries are fixed, so the reduction order
/// does not depend on how many threads run.
const CHUNK: u64 = 4096;

const OBSERVATION_TAG: u64 = 0;
const SIDE_TAG: u64 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Tally {
    pub n: u64,
    pub covered: u64,
    pub size_sum: f64,
    pub size_sq_sum: f64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            n: self.n + other.n,
            covered: self.covered + other.covered,
            size_sum: self.size_sum + other.size_sum,
            size_sq_sum: self.size_sq_sum + other.size_sq_sum,
        }
    }

    pub fn coverage(&self) -> (f64, f64) {
        let n = self.n as f64;
        let p = self.covered as f64 / n;
        (p, (p * (1.0 - p) / n).sqrt())
    }

    pub fn size(&self) -> (f64, f64) {
        let n = self.n as f64;
        let mean = self.size_sum / n;
        let var = (self.size_sq_sum / n - mean * mean).max(0.0);
        (mean, (var / n).sqrt())
    }
}

/// Sample `i` uses observation draw `i` and side draw `i` of two forks of
/// `stream`, offset by the stream's counter.
pub(crate) fn simulate(
    model: &ModelKind,
    estimator: &Estimator,
    theta: ParamPoint,
    n: u64,
    stream: &RandomStream,
) -> Result<Tally> {
    let (mean, sigma) = model.normal_params(theta)?;
    let observations = stream.fork(OBSERVATION_TAG);
    let side = stream.fork(SIDE_TAG);
    let start = stream.counter();
    let chunks = n.div_ceil(CHUNK);

    let partials: Vec<Result<Tally>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let len = CHUNK.min(n - lo) as usize;
            let mut ys = vec![0.0; len];
            observations.fill(start + lo, &mut ys);
            let mut us = vec![0.5; len];
            if estimator.uses_side_draw() {
                side.fill(start + lo, &mut us);
            }
            let mut t = Tally::default();
            for (u_obs, u_side) in ys.iter().zip(&us) {
                let y = mean + sigma * std_normal_quantile(*u_obs);
                let region = estimator.region(model, y, *u_side)?;
                let size = region.size();
                t.n += 1;
                t.covered += region.contains(theta) as u64;
                t.size_sum += size;
                t.size_sq_sum += size * size;
            }
            Ok(t)
        })
        .collect();

    let mut total = Tally::default();
    for p in partials {
        total = total.merge(p?);
    }
    Ok(total)
}

//! Experiment configuration: a JSON file with decimal-string numerics,
//! overridden field by field by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::args::CommonArgs;
use super::CliError;
use crate::evaluation::{Estimator, EstimatorKind, DEFAULT_SAMPLES};
use crate::models::{GaussianLocationModel, ModelKind, ParamPoint, TwoPointGaussianModel};
use crate::numfmt::{f64_str, fmt17, opt_f64_str, parse_decimal};
use crate::regions::RegionSpec;
use crate::specfun::Prob;

pub const SEED_ENV: &str = "CONFREG_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ModelTag {
    TwoPoint,
    Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "txt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Delta,
    Sigma0,
    Sigma1,
}

// ---- file schema ----

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: Option<ModelFile>,
    pub estimators: Option<Vec<EstimatorFile>>,
    pub delta: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub thetas: Option<Vec<String>>,
    pub n: Option<u64>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub sweep: Option<SweepFile>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub kind: Option<ModelTag>,
    pub sigma0: Option<String>,
    pub sigma1: Option<String>,
    pub sigma: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorFile {
    pub kind: EstimatorKind,
    pub prior1: Option<String>,
    pub level: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub axis: SweepAxis,
    pub values: Vec<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed config {}: {e}", path.display())))
    }
}

// ---- resolved configuration ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    TwoPoint {
        #[serde(with = "f64_str")]
        sigma0: f64,
        #[serde(with = "f64_str")]
        sigma1: f64,
    },
    Location {
        #[serde(with = "f64_str")]
        sigma: f64,
    },
}

impl ModelSpec {
    pub fn build(&self) -> crate::Result<ModelKind> {
        Ok(match *self {
            ModelSpec::TwoPoint { sigma0, sigma1 } => {
                TwoPointGaussianModel::new(sigma0, sigma1)?.into()
            }
            ModelSpec::Location { sigma } => GaussianLocationModel::new(sigma)?.into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    #[serde(with = "opt_f64_str", default, skip_serializing_if = "Option::is_none")]
    pub prior1: Option<f64>,
    #[serde(with = "opt_f64_str", default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
}

/// Pivot band, as given: either `delta` or `(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Delta(#[serde(with = "f64_str")] f64),
    Range {
        #[serde(with = "f64_str")]
        alpha: f64,
        #[serde(with = "f64_str")]
        beta: f64,
    },
}

impl Band {
    pub fn spec(&self) -> crate::Result<RegionSpec> {
        match *self {
            Band::Delta(d) => RegionSpec::from_delta(Prob::new(d)?),
            Band::Range { alpha, beta } => RegionSpec::from_values(alpha, beta),
        }
    }

    /// `delta` for symmetric bands.
    pub fn delta(&self) -> Option<f64> {
        match *self {
            Band::Delta(d) => Some(d),
            Band::Range { alpha, beta } if alpha == 1.0 - beta => Some(alpha),
            Band::Range { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<SweepValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SweepValue(#[serde(with = "f64_str")] pub f64);

/// Fully resolved experiment. Everything that can change a report is here;
/// the worker count and output directory are kept apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub estimators: Vec<EstimatorSpec>,
    pub band: Band,
    pub thetas: Vec<ParamPoint>,
    pub n: u64,
    pub seed: u64,
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone)]
pub struct RunSettings {
    pub config: ExperimentConfig,
    pub workers: Option<usize>,
    pub out_dir: PathBuf,
}

fn decimal(name: &str, s: &str) -> Result<f64, CliError> {
    parse_decimal(s).map_err(|e| CliError::Usage(format!("{name}: {e}")))
}

fn opt_decimal(name: &str, s: Option<&String>) -> Result<Option<f64>, CliError> {
    s.map(|v| decimal(name, v)).transpose()
}

fn band_from(
    delta: Option<&String>,
    alpha: Option<&String>,
    beta: Option<&String>,
    source: &str,
) -> Result<Option<Band>, CliError> {
    match (delta, alpha, beta) {
        (None, None, None) => Ok(None),
        (Some(d), None, None) => Ok(Some(Band::Delta(decimal("delta", d)?))),
        (None, Some(a), Some(b)) => Ok(Some(Band::Range {
            alpha: decimal("alpha", a)?,
            beta: decimal("beta", b)?,
        })),
        (Some(_), _, _) => Err(CliError::Usage(format!(
            "{source}: delta and alpha/beta are mutually exclusive"
        ))),
        _ => Err(CliError::Usage(format!("{source}: alpha and beta go together"))),
    }
}

/// Which command the configuration is for; it decides a few defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Reproduce,
    Eval,
    Sweep,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Reproduce => "reproduce",
            CommandKind::Eval => "eval",
            CommandKind::Sweep => "sweep",
        }
    }
}

/// Merges file, flags, environment and defaults (in that precedence, flags
/// first) and validates the result.
pub fn resolve(
    command: CommandKind,
    args: &CommonArgs,
    sweep: Option<(Option<SweepAxis>, Option<&Vec<String>>)>,
    env_seed: Option<String>,
) -> Result<RunSettings, CliError> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let file_model = file.model.unwrap_or_default();

    let kind = args.model.or(file_model.kind).unwrap_or(ModelTag::TwoPoint);
    let sigma0 = opt_decimal("sigma0", args.sigma0.as_ref().or(file_model.sigma0.as_ref()))?;
    let sigma1 = opt_decimal("sigma1", args.sigma1.as_ref().or(file_model.sigma1.as_ref()))?;
    let sigma = opt_decimal("sigma", args.sigma.as_ref().or(file_model.sigma.as_ref()))?;
    let model = match kind {
        ModelTag::TwoPoint => {
            if sigma.is_some() {
                return Err(CliError::Usage("sigma applies to the location model".into()));
            }
            ModelSpec::TwoPoint {
                sigma0: sigma0.unwrap_or(10.0),
                sigma1: sigma1.unwrap_or(0.1),
            }
        }
        ModelTag::Location => {
            if sigma0.is_some() || sigma1.is_some() {
                return Err(CliError::Usage(
                    "sigma0/sigma1 apply to the two-point model".into(),
                ));
            }
            ModelSpec::Location {
                sigma: sigma.unwrap_or(1.0),
            }
        }
    };
    if command != CommandKind::Eval && kind != ModelTag::TwoPoint {
        return Err(CliError::Usage(format!(
            "{} runs on the two-point model",
            command.as_str()
        )));
    }

    let flag_band = band_from(args.delta.as_ref(), args.alpha.as_ref(), args.beta.as_ref(), "flags")?;
    let file_band = band_from(file.delta.as_ref(), file.alpha.as_ref(), file.beta.as_ref(), "config")?;
    let band = flag_band.or(file_band).unwrap_or(Band::Delta(0.05));

    let flag_prior1 = opt_decimal("prior1", args.prior1.as_ref())?;
    let flag_level = opt_decimal("level", args.level.as_ref())?;
    let mut estimators: Vec<EstimatorSpec> = match (&args.estimators, file.estimators) {
        (Some(kinds), _) => kinds
            .iter()
            .map(|k| EstimatorSpec {
                kind: *k,
                prior1: None,
                level: None,
            })
            .collect(),
        (None, Some(list)) => list
            .into_iter()
            .map(|e| {
                Ok(EstimatorSpec {
                    kind: e.kind,
                    prior1: opt_decimal("prior1", e.prior1.as_ref())?,
                    level: opt_decimal("level", e.level.as_ref())?,
                })
            })
            .collect::<Result<_, CliError>>()?,
        (None, None) => match kind {
            ModelTag::TwoPoint => vec![EstimatorKind::Improved, EstimatorKind::Fiducial],
            ModelTag::Location => vec![EstimatorKind::Fiducial, EstimatorKind::FlatPrior],
        }
        .into_iter()
        .map(|k| EstimatorSpec {
            kind: k,
            prior1: None,
            level: None,
        })
        .collect(),
    };
    for e in estimators.iter_mut() {
        if e.kind == EstimatorKind::Bayes {
            e.prior1 = flag_prior1.or(e.prior1).or(Some(0.5));
            e.level = flag_level.or(e.level).or(Some(0.9));
        } else if e.prior1.is_some() || e.level.is_some() {
            return Err(CliError::Usage(format!(
                "prior1/level only apply to bayes, not {}",
                e.kind.as_str()
            )));
        }
    }
    if estimators.is_empty() && command == CommandKind::Eval {
        return Err(CliError::Usage("estimator list is empty".into()));
    }

    let theta_strings = args.thetas.clone().or(file.thetas);
    let thetas = match (kind, theta_strings) {
        (ModelTag::TwoPoint, None) => vec![ParamPoint::Label(0), ParamPoint::Label(1)],
        (ModelTag::Location, None) => vec![ParamPoint::Location(0.0)],
        (ModelTag::TwoPoint, Some(list)) => list
            .iter()
            .map(|s| match s.trim() {
                "0" => Ok(ParamPoint::Label(0)),
                "1" => Ok(ParamPoint::Label(1)),
                other => Err(CliError::Usage(format!(
                    "two-point theta must be 0 or 1, got {other:?}"
                ))),
            })
            .collect::<Result<_, _>>()?,
        (ModelTag::Location, Some(list)) => list
            .iter()
            .map(|s| decimal("theta", s).map(ParamPoint::Location))
            .collect::<Result<_, _>>()?,
    };
    if thetas.is_empty() {
        return Err(CliError::Usage("theta list is empty".into()));
    }

    let n = args.n.or(file.n).unwrap_or(DEFAULT_SAMPLES);
    let seed = match args.seed.or(file.seed) {
        Some(s) => s,
        None => match env_seed {
            Some(s) => s.trim().parse().map_err(|_| {
                CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))
            })?,
            None => DEFAULT_SEED,
        },
    };
    let format = args.format.or(file.format).unwrap_or(match command {
        CommandKind::Sweep => OutputFormat::Csv,
        _ => OutputFormat::Json,
    });

    let sweep = match command {
        CommandKind::Sweep => {
            let (flag_axis, flag_values) = sweep.unwrap_or((None, None));
            let axis = flag_axis
                .or(file.sweep.as_ref().map(|s| s.axis))
                .unwrap_or(SweepAxis::Delta);
            let raw = flag_values
                .cloned()
                .or(file.sweep.map(|s| s.values))
                .unwrap_or_default();
            if raw.is_empty() {
                return Err(CliError::Usage("sweep needs at least one value".into()));
            }
            let values = raw
                .iter()
                .map(|v| decimal("sweep value", v).map(SweepValue))
                .collect::<Result<_, _>>()?;
            Some(SweepSpec { axis, values })
        }
        _ => None,
    };

    let config = ExperimentConfig {
        model,
        estimators,
        band,
        thetas,
        n,
        seed,
        format,
        sweep,
    };
    config.validate(command)?;
    Ok(RunSettings {
        config,
        workers: args.workers.or(file.workers),
        out_dir: args
            .out
            .clone()
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("reports")),
    })
}

impl ExperimentConfig {
    fn validate(&self, command: CommandKind) -> Result<(), CliError> {
        let usage = |e: crate::Error| CliError::Usage(e.to_string());
        if self.n == 0 {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        let model = self.model.build().map_err(usage)?;
        let spec = self.band.spec().map_err(usage)?;
        if command != CommandKind::Eval {
            let delta = self.band.delta().ok_or_else(|| {
                CliError::Usage(format!("{} needs a symmetric band (delta)", command.as_str()))
            })?;
            crate::regions::check_counterexample_delta(Prob::new(delta).map_err(usage)?)
                .map_err(usage)?;
        }
        if let Some(sweep) = &self.sweep {
            for v in &sweep.values {
                match sweep.axis {
                    SweepAxis::Delta => crate::regions::check_counterexample_delta(
                        Prob::new(v.0).map_err(usage)?,
                    )
                    .map_err(usage)?,
                    SweepAxis::Sigma0 | SweepAxis::Sigma1 => {
                        if !(v.0 > 0.0 && v.0.is_finite()) {
                            return Err(CliError::Usage(format!(
                                "sigma sweep values must be positive, got {}",
                                fmt17(v.0)
                            )));
                        }
                    }
                }
            }
        }
        for e in &self.estimators {
            if e.kind == EstimatorKind::Improved && self.band.delta().is_none() {
                return Err(CliError::Usage(
                    "improved estimator needs a symmetric band (delta)".into(),
                ));
            }
            if let Some(d) = self.band.delta().filter(|_| e.kind == EstimatorKind::Improved) {
                crate::regions::check_counterexample_delta(Prob::new(d).map_err(usage)?)
                    .map_err(usage)?;
            }
            if let (Some(p), Some(l)) = (e.prior1, e.level) {
                Prob::new(p).map_err(usage)?;
                if !(l > 0.0 && l < 1.0) {
                    return Err(CliError::Usage(format!("level must lie in (0, 1), got {l}")));
                }
            }
            if e.kind == EstimatorKind::FlatPrior && spec.alpha() == spec.beta() {
                return Err(CliError::Usage("flat_prior needs alpha < beta".into()));
            }
            let probe = match e.kind {
                EstimatorKind::Improved => None,
                _ => Some(self.build_estimator(e, &model).map_err(usage)?),
            };
            if let Some(est) = probe {
                est.check_model(&model).map_err(usage)?;
            } else if model.two_point().is_none() {
                return Err(CliError::Usage(
                    "improved estimator needs the two-point model".into(),
                ));
            }
        }
        Ok(())
    }

    /// Builds one estimator. The improved one may fail with
    /// [`crate::Error::Infeasible`] outside its regime.
    pub fn build_estimator(
        &self,
        spec: &EstimatorSpec,
        model: &ModelKind,
    ) -> crate::Result<Estimator> {
        let band = self.band.spec()?;
        Ok(match spec.kind {
            EstimatorKind::Fiducial => Estimator::Fiducial(band),
            EstimatorKind::Degenerate => Estimator::Degenerate(band),
            EstimatorKind::FlatPrior => Estimator::FlatPrior(band),
            EstimatorKind::Bayes => Estimator::Bayes {
                prior1: Prob::new(spec.prior1.unwrap_or(0.5))?,
                level: Prob::new(spec.level.unwrap_or(0.9))?,
            },
            EstimatorKind::Improved => {
                let m = model.two_point().ok_or_else(|| {
                    crate::Error::Validation("improved estimator needs the two-point model".into())
                })?;
                let delta = self.band.delta().ok_or_else(|| {
                    crate::Error::Validation("improved estimator needs delta".into())
                })?;
                Estimator::improved(m, Prob::new(delta)?)?
            }
        })
    }

    /// First 12 hex digits of the SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serialises");
        let hash = Sha256::digest(&canonical);
        hash.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

//! Gaussian parametric families: the two-point model with locations 0 and 1,
//! and the unconstrained location family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    gaussian_quantile, log_normal_density, std_normal_cdf, std_normal_quantile, Prob,
    RandomStream,
};

/// A point in a model's parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamPoint {
    /// Index into a finite parameter set.
    Label(usize),
    /// Real location, for location families.
    Location(#[serde(with = "crate::numfmt::f64_str")] f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterSpace {
    Finite(usize),
    RealLine,
}

impl std::fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamPoint::Label(i) => write!(f, "{i}"),
            ParamPoint::Location(x) => write!(f, "{}", crate::numfmt::fmt6(*x)),
        }
    }
}

impl ParameterSpace {
    pub fn contains(&self, theta: ParamPoint) -> bool {
        match (self, theta) {
            (ParameterSpace::Finite(k), ParamPoint::Label(i)) => i < *k,
            (ParameterSpace::RealLine, ParamPoint::Location(x)) => x.is_finite(),
            _ => false,
        }
    }

    /// Number of points for finite spaces.
    pub fn size(&self) -> Option<usize> {
        match self {
            ParameterSpace::Finite(k) => Some(*k),
            ParameterSpace::RealLine => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ParameterSpace::Finite(_))
    }
}

/// A family `p_θ` where each member is normal, so density, CDF, quantile and
/// sampling all follow from the per-θ mean and standard deviation.
pub trait Model: Send + Sync {
    fn parameter_space(&self) -> ParameterSpace;

    /// `(mean, sigma)` of `p_θ`.
    fn normal_params(&self, theta: ParamPoint) -> Result<(f64, f64)>;

    /// `U(y0; θ) = P_θ(y <= y0)`.
    fn cdf(&self, theta: ParamPoint, y0: f64) -> Result<Prob> {
        if !y0.is_finite() {
            return Err(Error::Domain(format!("observation must be finite, got {y0}")));
        }
        let (mean, sigma) = self.normal_params(theta)?;
        Ok(Prob::saturating(std_normal_cdf((y0 - mean) / sigma)))
    }

    fn quantile(&self, theta: ParamPoint, p: Prob) -> Result<f64> {
        let (mean, sigma) = self.normal_params(theta)?;
        Ok(mean + sigma * gaussian_quantile(p)?)
    }

    fn log_density(&self, theta: ParamPoint, y: f64) -> Result<f64> {
        let (mean, sigma) = self.normal_params(theta)?;
        Ok(log_normal_density(y, mean, sigma))
    }

    /// `k` inverse-CDF draws using stream indices `counter .. counter + k`.
    fn sample(&self, theta: ParamPoint, stream: &RandomStream, k: usize) -> Result<Vec<f64>> {
        let (mean, sigma) = self.normal_params(theta)?;
        let mut out = vec![0.0; k];
        stream.fill(stream.counter(), &mut out);
        for y in out.iter_mut() {
            *y = mean + sigma * std_normal_quantile(*y);
        }
        Ok(out)
    }
}

fn check_sigma(name: &str, sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("{name} must be positive and finite, got {sigma}")))
    }
}

/// `y ~ N(0, sigma0²)` under θ = 0 and `y ~ N(1, sigma1²)` under θ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointGaussianModel {
    sigma0: f64,
    sigma1: f64,
}

impl TwoPointGaussianModel {
    pub const LOCATIONS: [f64; 2] = [0.0, 1.0];

    pub fn new(sigma0: f64, sigma1: f64) -> Result<Self> {
        check_sigma("sigma0", sigma0)?;
        check_sigma("sigma1", sigma1)?;
        Ok(TwoPointGaussianModel { sigma0, sigma1 })
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn sigma(&self, label: usize) -> f64 {
        if label == 0 {
            self.sigma0
        } else {
            self.sigma1
        }
    }
}

impl Model for TwoPointGaussianModel {
    fn parameter_space(&self) -> ParameterSpace {
        ParameterSpace::Finite(2)
    }

    fn normal_params(&self, theta: ParamPoint) -> Result<(f64, f64)> {
        match theta {
            ParamPoint::Label(i @ (0 | 1)) => Ok((Self::LOCATIONS[i], self.sigma(i))),
            other => Err(Error::Parameter(format!(
                "{other:?} is not in the two-point space {{0, 1}}"
            ))),
        }
    }
}

/// `y ~ N(θ, sigma²)` with θ ranging over the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLocationModel {
    sigma: f64,
}

impl GaussianLocationModel {
    pub fn new(sigma: f64) -> Result<Self> {
        check_sigma("sigma", sigma)?;
        Ok(GaussianLocationModel { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Model for GaussianLocationModel {
    fn parameter_space(&self) -> ParameterSpace {
        ParameterSpace::RealLine
    }

    fn normal_params(&self, theta: ParamPoint) -> Result<(f64, f64)> {
        match theta {
            ParamPoint::Location(x) if x.is_finite() => Ok((x, self.sigma)),
            other => Err(Error::Parameter(format!(
                "{other:?} is not a finite location"
            ))),
        }
    }
}

/// Either supported model, for configuration-driven pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    TwoPoint(TwoPointGaussianModel),
    Location(GaussianLocationModel),
}

impl ModelKind {
    pub fn as_dyn(&self) -> &dyn Model {
        match self {
            ModelKind::TwoPoint(m) => m,
            ModelKind::Location(m) => m,
        }
    }

    pub fn two_point(&self) -> Option<&TwoPointGaussianModel> {
        match self {
            ModelKind::TwoPoint(m) => Some(m),
            ModelKind::Location(_) => None,
        }
    }
}

impl Model for ModelKind {
    fn parameter_space(&self) -> ParameterSpace {
        self.as_dyn().parameter_space()
    }

    fn normal_params(&self, theta: ParamPoint) -> Result<(f64, f64)> {
        self.as_dyn().normal_params(theta)
    }
}

impl From<TwoPointGaussianModel> for ModelKind {
    fn from(m: TwoPointGaussianModel) -> Self {
        ModelKind::TwoPoint(m)
    }
}

impl From<GaussianLocationModel> for ModelKind {
    fn from(m: GaussianLocationModel) -> Self {
        ModelKind::Location(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Prob {
        Prob::new(v).unwrap()
    }

    #[test]
    fn two_point_cdf_values() {
        let m = TwoPointGaussianModel::new(1.0, 0.3).unwrap();
        assert_eq!(m.cdf(ParamPoint::Label(0), 0.0).unwrap().value(), 0.5);
        assert_eq!(m.cdf(ParamPoint::Label(1), 1.0).unwrap().value(), 0.5);
        let v = m.cdf(ParamPoint::Label(0), 1.0).unwrap().value();
        assert!((v - 0.841_344_746_068_542_9).abs() < 1e-15);
    }

    #[test]
    fn two_point_quantiles() {
        let m = TwoPointGaussianModel::new(10.0, 0.1).unwrap();
        assert_eq!(m.quantile(ParamPoint::Label(0), Prob::HALF).unwrap(), 0.0);
        assert_eq!(m.quantile(ParamPoint::Label(1), Prob::HALF).unwrap(), 1.0);
        let q = m.quantile(ParamPoint::Label(0), p(0.05)).unwrap();
        assert!((q + 16.448_536_269_514_727).abs() < 1e-12, "{q}");
    }

    #[test]
    fn parameter_validation() {
        let m = TwoPointGaussianModel::new(1.0, 1.0).unwrap();
        assert!(matches!(m.cdf(ParamPoint::Label(2), 0.0), Err(Error::Parameter(_))));
        assert!(matches!(
            m.cdf(ParamPoint::Location(0.0), 0.0),
            Err(Error::Parameter(_))
        ));
        assert!(TwoPointGaussianModel::new(0.0, 1.0).is_err());
        assert!(GaussianLocationModel::new(-2.0).is_err());
        let loc = GaussianLocationModel::new(2.0).unwrap();
        assert!(loc.cdf(ParamPoint::Label(0), 0.0).is_err());
        let c = loc.cdf(ParamPoint::Location(1.0), 3.0).unwrap().value();
        assert!((c - 0.841_344_746_068_542_9).abs() < 1e-15);
    }

    #[test]
    fn parameter_spaces() {
        let tp = TwoPointGaussianModel::new(1.0, 1.0).unwrap().parameter_space();
        assert_eq!(tp.size(), Some(2));
        assert!(tp.contains(ParamPoint::Label(1)));
        assert!(!tp.contains(ParamPoint::Label(2)));
        let loc = GaussianLocationModel::new(1.0).unwrap().parameter_space();
        assert_eq!(loc, ParameterSpace::RealLine);
        assert!(loc.size().is_none());
        assert!(loc.contains(ParamPoint::Location(-1e9)));
    }

    #[test]
    fn sample_empty_and_deterministic() {
        let m = TwoPointGaussianModel::new(2.0, 0.5).unwrap();
        let s = RandomStream::new(11);
        assert!(m.sample(ParamPoint::Label(0), &s, 0).unwrap().is_empty());
        let a = m.sample(ParamPoint::Label(1), &s, 50).unwrap();
        let b = m.sample(ParamPoint::Label(1), &s, 50).unwrap();
        assert_eq!(a, b);
        // draw i is the quantile of uniform draw i
        let expect = m.quantile(ParamPoint::Label(1), p(s.draw(7))).unwrap();
        assert_eq!(a[7], expect);
        // continuing from an advanced counter lines up with the longer run
        let tail = m.sample(ParamPoint::Label(1), &s.advanced(20), 30).unwrap();
        assert_eq!(&a[20..], &tail[..]);
    }
}

//! Thresholding bandit instances, classifications and simple regret.
//!
//! Arms are indexed `1..=K` everywhere in the public API. A classification
//! assigns `+1` to arms predicted at or above the threshold and `-1` to the
//! rest; the simple regret of a classification is the largest gap
//! `|tau - mu_k|` among misclassified arms, or 0 when nothing is
//! misclassified.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack for the shape checks, so that families built from exact
/// linear pieces are not rejected over rounding.
const SHAPE_TOL: f64 = 1e-12;

/// Reward distribution of a single arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArmDistribution {
    Bernoulli { p: f64 },
    Gaussian { mean: f64, sigma: f64 },
    Deterministic { value: f64 },
}

impl ArmDistribution {
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("bernoulli p = {p} outside [0, 1]")));
        }
        Ok(ArmDistribution::Bernoulli { p })
    }

    pub fn gaussian(mean: f64, sigma: f64) -> Result<Self> {
        if !mean.is_finite() || !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::param(format!("gaussian({mean}, {sigma}) is not a valid arm")));
        }
        Ok(ArmDistribution::Gaussian { mean, sigma })
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::param("deterministic value must be finite"));
        }
        Ok(ArmDistribution::Deterministic { value })
    }

    /// The exact mean.
    pub fn mean(&self) -> f64 {
        match *self {
            ArmDistribution::Bernoulli { p } => p,
            ArmDistribution::Gaussian { mean, .. } => mean,
            ArmDistribution::Deterministic { value } => value,
        }
    }

    pub fn kind(&self) -> ArmKind {
        match self {
            ArmDistribution::Bernoulli { .. } => ArmKind::Bernoulli,
            ArmDistribution::Gaussian { .. } => ArmKind::Gaussian,
            ArmDistribution::Deterministic { .. } => ArmKind::Deterministic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArmKind {
    Bernoulli,
    Gaussian,
    Deterministic,
}

/// Shape constraint on the mean sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    #[default]
    None,
    Monotone,
    Unimodal,
    Concave,
}

impl Shape {
    pub const ALL: [Shape; 4] = [Shape::None, Shape::Monotone, Shape::Unimodal, Shape::Concave];

    pub fn as_str(&self) -> &'static str {
        match self {
            Shape::None => "none",
            Shape::Monotone => "monotone",
            Shape::Unimodal => "unimodal",
            Shape::Concave => "concave",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" | "unstructured" => Ok(Shape::None),
            "monotone" => Ok(Shape::Monotone),
            "unimodal" => Ok(Shape::Unimodal),
            "concave" => Ok(Shape::Concave),
            other => Err(Error::param(format!("unknown shape '{other}'"))),
        }
    }
}

/// Predicted (or true) labels, one `+1`/`-1` entry per arm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Classification(Vec<i8>);

impl Classification {
    pub fn new(labels: Vec<i8>) -> Result<Self> {
        if let Some(bad) = labels.iter().find(|&&q| q != 1 && q != -1) {
            return Err(Error::param(format!("classification entry {bad} is not +1 or -1")));
        }
        Ok(Classification(labels))
    }

    pub fn from_above(above: impl IntoIterator<Item = bool>) -> Self {
        Classification(above.into_iter().map(|a| if a { 1 } else { -1 }).collect())
    }

    /// `+1` for every arm `k >= khat` (1-based), `-1` below.
    pub fn step(k: usize, khat: usize) -> Self {
        Self::from_above((1..=k).map(|j| j >= khat))
    }

    /// `+1` exactly on the arms of `lo..=hi` (1-based); empty when `lo > hi`.
    pub fn interval(k: usize, lo: usize, hi: usize) -> Self {
        Self::from_above((1..=k).map(|j| lo <= j && j <= hi))
    }

    pub fn all_below(k: usize) -> Self {
        Classification(vec![-1; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[i8] {
        &self.0
    }

    /// Label of arm `k` (1-based).
    pub fn get(&self, k: usize) -> i8 {
        self.0[k - 1]
    }

    pub fn is_above(&self, k: usize) -> bool {
        self.get(k) == 1
    }

    /// The classification read with arm `i` relabeled `K + 1 - i`.
    pub fn reversed(&self) -> Self {
        Classification(self.0.iter().rev().copied().collect())
    }
}

impl TryFrom<Vec<i8>> for Classification {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Classification::new(v)
    }
}

impl From<Classification> for Vec<i8> {
    fn from(c: Classification) -> Self {
        c.0
    }
}

/// A thresholding bandit problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<ArmDistribution>,
    tau: f64,
    shape: Shape,
    sigma: f64,
}

impl BanditInstance {
    /// Checks the arm list, the declared sub-Gaussian scale and the shape
    /// constraint before building the instance.
    pub fn new(arms: Vec<ArmDistribution>, tau: f64, shape: Shape, sigma: f64) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::DegenerateProblem("an instance needs at least one arm".into()));
        }
        if !tau.is_finite() {
            return Err(Error::param("tau must be finite"));
        }
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::param(format!("sigma = {sigma} must be a finite nonnegative number")));
        }
        for (i, arm) in arms.iter().enumerate() {
            match *arm {
                ArmDistribution::Bernoulli { p } if !(0.0..=1.0).contains(&p) => {
                    return Err(Error::param(format!("arm {}: bernoulli p = {p}", i + 1)));
                }
                ArmDistribution::Gaussian { sigma: s, .. } if s > sigma => {
                    return Err(Error::param(format!(
                        "arm {}: gaussian sigma {s} exceeds the declared scale {sigma}",
                        i + 1
                    )));
                }
                _ => {}
            }
        }
        let instance = BanditInstance { arms, tau, shape, sigma };
        if !validate_shape(&instance.means(), shape) {
            return Err(Error::ShapeViolation(shape));
        }
        Ok(instance)
    }

    /// Homogeneous Bernoulli instance with the default scale `sigma = 1`.
    pub fn bernoulli(means: &[f64], tau: f64, shape: Shape) -> Result<Self> {
        let arms = means.iter().map(|&p| ArmDistribution::bernoulli(p)).collect::<Result<_>>()?;
        Self::new(arms, tau, shape, 1.0)
    }

    pub fn gaussian(means: &[f64], sigma: f64, tau: f64, shape: Shape) -> Result<Self> {
        let arms = means
            .iter()
            .map(|&m| ArmDistribution::gaussian(m, sigma))
            .collect::<Result<_>>()?;
        Self::new(arms, tau, shape, sigma)
    }

    /// Noiseless instance with the default scale `sigma = 1`.
    pub fn deterministic(means: &[f64], tau: f64, shape: Shape) -> Result<Self> {
        Self::deterministic_with_sigma(means, tau, shape, 1.0)
    }

    pub fn deterministic_with_sigma(means: &[f64], tau: f64, shape: Shape, sigma: f64) -> Result<Self> {
        let arms = means
            .iter()
            .map(|&v| ArmDistribution::deterministic(v))
            .collect::<Result<_>>()?;
        Self::new(arms, tau, shape, sigma)
    }

    pub fn k(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[ArmDistribution] {
        &self.arms
    }

    /// Arm `k` (1-based).
    pub fn arm(&self, k: usize) -> &ArmDistribution {
        &self.arms[k - 1]
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmDistribution::mean).collect()
    }

    /// `|tau - mu_k|` for each arm.
    pub fn gaps(&self) -> Vec<f64> {
        self.arms.iter().map(|a| (self.tau - a.mean()).abs()).collect()
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps().into_iter().fold(0.0, f64::max)
    }

    /// Same arms with another threshold; the shape is unaffected.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.arms.clone(), tau, self.shape, self.sigma)
    }

    /// Arm `i` relabeled `K + 1 - i`. A monotone declaration cannot survive
    /// the reversal, so the reversed instance is declared unstructured
    /// unless the original is unimodal or concave.
    pub fn reversed(&self) -> Self {
        let shape = match self.shape {
            Shape::Monotone => Shape::None,
            s => s,
        };
        BanditInstance {
            arms: self.arms.iter().rev().copied().collect(),
            tau: self.tau,
            shape,
            sigma: self.sigma,
        }
    }
}

/// `Q_k = +1` iff `mu_k >= tau`.
pub fn true_classification(instance: &BanditInstance) -> Classification {
    Classification::from_above(instance.arms.iter().map(|a| a.mean() >= instance.tau))
}

/// Largest gap among the arms `qhat` gets wrong; 0 for a perfect answer.
pub fn simple_regret(instance: &BanditInstance, qhat: &Classification) -> Result<f64> {
    if qhat.len() != instance.k() {
        return Err(Error::InvalidClassification { got: qhat.len(), expected: instance.k() });
    }
    let truth = true_classification(instance);
    Ok(instance
        .arms
        .iter()
        .zip(truth.labels().iter().zip(qhat.labels()))
        .filter(|(_, (q, qh))| q != qh)
        .map(|(a, _)| (instance.tau - a.mean()).abs())
        .fold(0.0, f64::max))
}

fn leq(a: f64, b: f64) -> bool {
    a <= b + SHAPE_TOL * (1.0 + a.abs().max(b.abs()))
}

/// Whether `means` belongs to the shape class. The concavity check covers
/// every interior index `2 <= k <= K - 1`.
pub fn validate_shape(means: &[f64], shape: Shape) -> bool {
    match shape {
        Shape::None => true,
        Shape::Monotone => means.windows(2).all(|w| leq(w[0], w[1])),
        Shape::Unimodal => {
            // climb as far as possible, then require a descent
            let mut k = 0;
            while k + 1 < means.len() && leq(means[k], means[k + 1]) {
                k += 1;
            }
            means[k..].windows(2).all(|w| leq(w[1], w[0]))
        }
        Shape::Concave => means.windows(3).all(|w| leq(0.5 * (w[0] + w[2]), w[1])),
    }
}

/// On-disk instance format.
///
/// ```json
/// {"kind": "gaussian", "means": [0.1, 0.5], "sigma": 1.0, "tau": 0.3,
///  "shape": "monotone", "arm_sigmas": [0.5, 1.0]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub kind: ArmKind,
    pub means: Vec<f64>,
    pub sigma: f64,
    pub tau: f64,
    #[serde(default)]
    pub shape: Shape,
    /// Per-arm standard deviations; gaussian only. Defaults to `sigma`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm_sigmas: Option<Vec<f64>>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<BanditInstance> {
        let arms = match self.kind {
            ArmKind::Bernoulli => {
                if self.arm_sigmas.is_some() {
                    return Err(Error::param("arm_sigmas is only allowed for gaussian instances"));
                }
                self.means.iter().map(|&p| ArmDistribution::bernoulli(p)).collect::<Result<Vec<_>>>()?
            }
            ArmKind::Deterministic => {
                if self.arm_sigmas.is_some() {
                    return Err(Error::param("arm_sigmas is only allowed for gaussian instances"));
                }
                self.means
                    .iter()
                    .map(|&v| ArmDistribution::deterministic(v))
                    .collect::<Result<Vec<_>>>()?
            }
            ArmKind::Gaussian => {
                let sigmas = match &self.arm_sigmas {
                    Some(s) if s.len() != self.means.len() => {
                        return Err(Error::param(format!(
                            "arm_sigmas has {} entries for {} arms",
                            s.len(),
                            self.means.len()
                        )));
                    }
                    Some(s) => s.clone(),
                    None => vec![self.sigma; self.means.len()],
                };
                self.means
                    .iter()
                    .zip(sigmas)
                    .map(|(&m, s)| ArmDistribution::gaussian(m, s))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        BanditInstance::new(arms, self.tau, self.shape, self.sigma)
    }

    pub fn from_instance(instance: &BanditInstance) -> Result<Self> {
        let kind = instance.arms[0].kind();
        if instance.arms.iter().any(|a| a.kind() != kind) {
            return Err(Error::param("mixed arm kinds cannot be written to an instance file"));
        }
        let arm_sigmas = match kind {
            ArmKind::Gaussian => {
                let s: Vec<f64> = instance
                    .arms
                    .iter()
                    .map(|a| match a {
                        ArmDistribution::Gaussian { sigma, .. } => *sigma,
                        _ => unreachable!(),
                    })
                    .collect();
                if s.iter().all(|&x| x == instance.sigma) {
                    None
                } else {
                    Some(s)
                }
            }
            _ => None,
        };
        Ok(InstanceFile {
            kind,
            means: instance.means(),
            sigma: instance.sigma,
            tau: instance.tau,
            shape: instance.shape,
            arm_sigmas,
        })
    }
}

impl BanditInstance {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&InstanceFile::from_instance(self)?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<InstanceFile>(s)?.into_instance()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(means: &[f64], tau: f64) -> BanditInstance {
        BanditInstance::deterministic(means, tau, Shape::None).unwrap()
    }

    #[test]
    fn classification_uses_weak_inequality() {
        assert_eq!(true_classification(&det(&[0.2, 0.5, 0.8], 0.5)).labels(), &[-1, 1, 1]);
        assert_eq!(true_classification(&det(&[0.1, 0.2], 0.9)).labels(), &[-1, -1]);
        assert_eq!(true_classification(&det(&[0.4], 0.4)).labels(), &[1]);
    }

    #[test]
    fn regret_examples() {
        let i = det(&[0.2, 0.6], 0.5);
        let r = simple_regret(&i, &Classification::new(vec![1, 1]).unwrap()).unwrap();
        assert!((r - 0.3).abs() < 1e-12);
        assert_eq!(simple_regret(&i, &true_classification(&i)).unwrap(), 0.0);

        let i = det(&[0.1, 0.9], 0.5);
        let r = simple_regret(&i, &Classification::new(vec![1, -1]).unwrap()).unwrap();
        assert!((r - 0.4).abs() < 1e-12);
    }

    #[test]
    fn regret_rejects_length_mismatch() {
        let i = det(&[0.1, 0.9], 0.5);
        let err = simple_regret(&i, &Classification::all_below(3)).unwrap_err();
        assert!(matches!(err, Error::InvalidClassification { got: 3, expected: 2 }));
    }

    #[test]
    fn shape_examples() {
        assert!(validate_shape(&[0.0, 1.0, 1.5], Shape::Concave));
        assert!(!validate_shape(&[0.0, 1.0, 3.0], Shape::Concave));
        assert!(validate_shape(&[0.0, 2.0, 1.0], Shape::Unimodal));
        assert!(!validate_shape(&[0.0, 2.0, 1.0], Shape::Monotone));
        assert!(!validate_shape(&[1.0, 0.0, 1.0], Shape::Unimodal));
        assert!(validate_shape(&[1.0, 1.0, 1.0], Shape::Unimodal));
        assert!(validate_shape(&[5.0], Shape::Concave));
        // the last interior index K-1 is checked too
        assert!(!validate_shape(&[0.0, 1.0, 2.0, 2.0, 5.0], Shape::Concave));
    }

    #[test]
    fn constructor_enforces_invariants() {
        assert!(matches!(
            BanditInstance::deterministic(&[0.0, 2.0, 1.0], 0.5, Shape::Monotone),
            Err(Error::ShapeViolation(Shape::Monotone))
        ));
        assert!(BanditInstance::bernoulli(&[1.2], 0.5, Shape::None).is_err());
        let arms = vec![ArmDistribution::gaussian(0.0, 2.0).unwrap()];
        assert!(BanditInstance::new(arms, 0.0, Shape::None, 1.0).is_err());
        assert!(BanditInstance::new(vec![], 0.0, Shape::None, 1.0).is_err());
    }

    #[test]
    fn json_schema_round_trip() {
        let text = r#"{"kind": "gaussian", "means": [0.1, 0.5], "sigma": 1.0, "tau": 0.3,
                       "shape": "monotone", "arm_sigmas": [0.5, 1.0]}"#;
        let i = BanditInstance::from_json(text).unwrap();
        assert_eq!(i.k(), 2);
        assert_eq!(i.arm(1), &ArmDistribution::Gaussian { mean: 0.1, sigma: 0.5 });
        assert_eq!(BanditInstance::from_json(&i.to_json().unwrap()).unwrap(), i);

        let bad = r#"{"kind": "bernoulli", "means": [0.1], "sigma": 1.0, "tau": 0.3, "arm_sigmas": [1.0]}"#;
        assert!(BanditInstance::from_json(bad).is_err());
    }

    #[test]
    fn classification_rejects_other_values() {
        assert!(Classification::new(vec![1, 0]).is_err());
        assert!(serde_json::from_str::<Classification>("[1, -1, 2]").is_err());
        assert_eq!(Classification::interval(5, 2, 3).labels(), &[-1, 1, 1, -1, -1]);
        assert_eq!(Classification::interval(3, 3, 2).labels(), &[-1, -1, -1]);
        assert_eq!(Classification::step(4, 3).labels(), &[-1, -1, 1, 1]);
    }
}

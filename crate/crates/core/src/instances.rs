//! Instance generators: the hard families behind the lower bounds, random
//! shape-constrained instances, and discretized Hölder functions.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{BanditInstance, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `Q_k eps` for a sign vector `Q`, threshold 0.
    Hypercube,
    /// `0` before arm `k`, `eps` from `k` on, threshold `eps / 2`.
    MonotoneStep,
    /// `eps` at arm `k`, `0` elsewhere, threshold `eps / 2`.
    UnimodalSpike,
    /// `(j / 2^l) eps` up to `j = 2^(l+1)`, then flat at `2 eps`; threshold
    /// `eps`.
    ConcaveRamp,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Hypercube, Family::MonotoneStep, Family::UnimodalSpike, Family::ConcaveRamp];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Hypercube => "hypercube",
            Family::MonotoneStep => "monotone_step",
            Family::UnimodalSpike => "unimodal_spike",
            Family::ConcaveRamp => "concave_ramp",
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Family::Hypercube => Shape::None,
            Family::MonotoneStep => Shape::Monotone,
            Family::UnimodalSpike => Shape::Unimodal,
            Family::ConcaveRamp => Shape::Concave,
        }
    }

    /// The family whose shape matches `shape`.
    pub fn for_shape(shape: Shape) -> Family {
        match shape {
            Shape::None => Family::Hypercube,
            Shape::Monotone => Family::MonotoneStep,
            Shape::Unimodal => Family::UnimodalSpike,
            Shape::Concave => Family::ConcaveRamp,
        }
    }

    /// Number of members of the family that are indexed by one integer
    /// (`None` for the hypercube).
    pub fn index_range(&self, k: usize) -> Option<std::ops::RangeInclusive<usize>> {
        match self {
            Family::Hypercube => None,
            Family::MonotoneStep | Family::UnimodalSpike => Some(1..=k),
            Family::ConcaveRamp => Some(1..=ramp_levels(k)),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::param(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Gaussian,
    /// Means shifted by `1/2`, Bernoulli rewards.
    Bernoulli,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Variant::Gaussian),
            "bernoulli" => Ok(Variant::Bernoulli),
            _ => Err(Error::param(format!("unknown variant {s:?}"))),
        }
    }
}

/// Which member of a family to build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyIndex {
    /// Sign vector for the hypercube.
    Signs(Vec<i8>),
    /// Step position, spike position, or ramp level.
    Index(usize),
}

/// `floor(log2 K)`.
pub fn ramp_levels(k: usize) -> usize {
    if k == 0 {
        0
    } else {
        (usize::BITS - 1 - k.leading_zeros()) as usize
    }
}

fn build(means: Vec<f64>, tau: f64, sigma: f64, shape: Shape, variant: Variant) -> Result<BanditInstance> {
    match variant {
        Variant::Gaussian => BanditInstance::gaussian(&means, sigma, tau, shape),
        Variant::Bernoulli => {
            let shifted: Vec<f64> = means.iter().map(|m| m + 0.5).collect();
            if shifted.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::param("epsilon too large for Bernoulli means"));
            }
            BanditInstance::bernoulli(&shifted, tau + 0.5, shape)
        }
    }
}

pub fn gen_lower_bound_instance(
    family: Family,
    k: usize,
    epsilon: f64,
    sigma: f64,
    index: &FamilyIndex,
    variant: Variant,
) -> Result<BanditInstance> {
    if k == 0 {
        return Err(Error::param("K must be positive"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    let bad_index = || Error::param(format!("{index:?} is not a member of {family} with K = {k}"));
    let (means, tau) = match (family, index) {
        (Family::Hypercube, FamilyIndex::Signs(q)) => {
            if q.len() != k || q.iter().any(|&s| s != 1 && s != -1) {
                return Err(bad_index());
            }
            (q.iter().map(|&s| s as f64 * epsilon).collect(), 0.0)
        }
        (Family::MonotoneStep, &FamilyIndex::Index(j)) if (1..=k).contains(&j) => {
            ((1..=k).map(|l| if l < j { 0.0 } else { epsilon }).collect(), epsilon / 2.0)
        }
        (Family::UnimodalSpike, &FamilyIndex::Index(j)) if (1..=k).contains(&j) => {
            ((1..=k).map(|l| if l == j { epsilon } else { 0.0 }).collect(), epsilon / 2.0)
        }
        (Family::ConcaveRamp, &FamilyIndex::Index(l)) if (1..=ramp_levels(k)).contains(&l) => {
            let kl = (1usize << l) as f64;
            let means = (1..=k)
                .map(|j| if j <= 2 << l { j as f64 / kl * epsilon } else { 2.0 * epsilon })
                .collect();
            (means, epsilon)
        }
        _ => return Err(bad_index()),
    };
    build(means, tau, sigma, family.shape(), variant)
}

/// The tolerance that the lower-bound argument for `family` optimizes at
/// budget `t`.
pub fn default_epsilon(family: Family, k: usize, budget: u64, sigma: f64) -> f64 {
    let (kf, t, s2) = (k as f64, budget as f64, sigma * sigma);
    match family {
        Family::Hypercube => (kf * s2 * kf.ln().max(2.0) / (8.0 * t)).sqrt(),
        Family::MonotoneStep => (s2 * kf.ln().max(2.0) / (8.0 * t)).sqrt(),
        Family::UnimodalSpike => (4.0 * s2 * kf / t).sqrt(),
        Family::ConcaveRamp => (s2 * (ramp_levels(k) as f64).ln().max(2.0) / (8.0 * t)).sqrt(),
    }
}

/// A member from the middle of the family: alternating signs, the middle
/// arm, or the middle ramp level.
pub fn middle_index(family: Family, k: usize) -> FamilyIndex {
    match family {
        Family::Hypercube => FamilyIndex::Signs((0..k).map(|j| if j % 2 == 0 { 1 } else { -1 }).collect()),
        Family::MonotoneStep | Family::UnimodalSpike => FamilyIndex::Index(k.div_ceil(2).max(1)),
        Family::ConcaveRamp => FamilyIndex::Index(ramp_levels(k).div_ceil(2).max(1)),
    }
}

/// Random means in `[0, 1]` projected onto `shape`, with `tau` uniform
/// between the smallest and largest mean.
pub fn gen_random_instance<R: Rng + ?Sized>(
    shape: Shape,
    k: usize,
    rng: &mut R,
    variant: Variant,
    sigma: f64,
) -> Result<BanditInstance> {
    if k == 0 {
        return Err(Error::param("K must be positive"));
    }
    let mut draws: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
    let means = match shape {
        Shape::None => draws,
        Shape::Monotone => {
            draws.sort_by(f64::total_cmp);
            draws
        }
        Shape::Unimodal => {
            let mode = rng.random_range(0..k);
            let top = (0..k).max_by(|&a, &b| draws[a].total_cmp(&draws[b])).expect("k >= 1");
            let peak = draws.swap_remove(top);
            let (left, right) = draws.split_at_mut(mode);
            left.sort_by(f64::total_cmp);
            right.sort_by(|a, b| b.total_cmp(a));
            let mut out = left.to_vec();
            out.push(peak);
            out.extend_from_slice(right);
            out
        }
        Shape::Concave => {
            let mut inc: Vec<f64> = (1..k).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
            inc.sort_by(|a, b| b.total_cmp(a));
            let mut out = Vec::with_capacity(k);
            let mut acc = 0.0;
            out.push(acc);
            for d in inc {
                acc += d;
                out.push(acc);
            }
            let lo = out.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = out.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                out.iter().map(|x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0)).collect()
            } else {
                vec![0.5; k]
            }
        }
    };
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tau = lo + (hi - lo) * rng.random::<f64>();
    match variant {
        Variant::Gaussian => BanditInstance::gaussian(&means, sigma, tau, shape),
        Variant::Bernoulli => BanditInstance::bernoulli(&means, tau, shape),
    }
}

/// Number of bins for a `beta`-Hölder function at budget `t`.
pub fn holder_bins(beta: f64, budget: u64, shape: Shape) -> Result<usize> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::param(format!("beta = {beta} must be positive")));
    }
    if budget < 2 {
        return Err(Error::param("discretization needs budget >= 2"));
    }
    let t = budget as f64;
    let m = match shape {
        Shape::None => (t / t.ln()).powf(1.0 / (2.0 * beta + 1.0)),
        Shape::Monotone | Shape::Concave => t.powf(1.0 / beta),
        Shape::Unimodal => t.powf(1.0 / (2.0 * beta + 1.0)),
    };
    Ok((m.round() as usize).max(2))
}

/// Bandit whose arm `j` has mean `f` at the midpoint of the `j`-th of `K`
/// equal bins of `[0, 1]`, with `K` from [`holder_bins`].
pub fn discretize_holder(
    f: impl Fn(f64) -> f64,
    beta: f64,
    budget: u64,
    shape: Shape,
    tau: f64,
    variant: Variant,
    sigma: f64,
) -> Result<BanditInstance> {
    let k = holder_bins(beta, budget, shape)?;
    let means: Vec<f64> = (1..=k).map(|j| f((j as f64 - 0.5) / k as f64)).collect();
    if means.iter().any(|m| !(0.0..=1.0).contains(m)) {
        return Err(Error::param("f must map [0, 1] into [0, 1]"));
    }
    match variant {
        Variant::Gaussian => BanditInstance::gaussian(&means, sigma, tau, shape),
        Variant::Bernoulli => BanditInstance::bernoulli(&means, tau, shape),
    }
}

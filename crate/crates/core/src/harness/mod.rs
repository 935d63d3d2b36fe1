//! Seeded episodes and Monte Carlo regret estimates.
//!
//! Every episode runs against a budget-capped environment. Rewards come from
//! the `rewards` stream of the episode seed and algorithm randomness from
//! its `algo` stream, so a result depends only on its arguments.
//! Repetitions run in parallel and are reduced in index order, so the
//! thread count never changes the output.

mod sweep;

pub use sweep::{fit_loglog, ols, rate_sweep, write_csv, write_json, Fit, IndexPolicy, SweepResult, SweepRow, SweepSpec};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::uniform_run;
use crate::ctb::{self, ctb_run};
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::mtb::{self, mtb_run, EpsilonRule, MtbConfig};
use crate::problem::{simple_regret, BanditInstance, Classification};
use crate::rng;
use crate::utb::utb_run;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Uniform,
    Mtb,
    DecMtb,
    Utb,
    Ctb,
}

impl Algo {
    pub const ALL: [Algo; 5] = [Algo::Uniform, Algo::Mtb, Algo::DecMtb, Algo::Utb, Algo::Ctb];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algo::Uniform => "uniform",
            Algo::Mtb => "mtb",
            Algo::DecMtb => "dec_mtb",
            Algo::Utb => "utb",
            Algo::Ctb => "ctb",
        }
    }

    /// Smallest budget at which the algorithm runs on `K` arms (possibly
    /// through its documented fallback).
    pub fn min_budget(&self, k: usize) -> u64 {
        match self {
            Algo::Mtb | Algo::DecMtb => mtb::min_budget(k),
            Algo::Uniform | Algo::Utb | Algo::Ctb => k as u64,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.as_str() == s || (s == "dec-mtb" && *a == Algo::DecMtb))
            .ok_or_else(|| Error::param(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    /// Phase-length scale of the concave solver.
    pub ctb_constant: f64,
    pub epsilon_rule: EpsilonRule,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig { ctb_constant: ctb::DEFAULT_CONSTANT, epsilon_rule: EpsilonRule::Threshold }
    }
}

impl AlgoConfig {
    pub fn with_ctb_constant(mut self, c: f64) -> Self {
        self.ctb_constant = c;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub qhat: Classification,
    pub regret: f64,
    pub pulls: u64,
    pub per_arm: Vec<u64>,
    /// Crossing arm reported by the monotone searches.
    pub khat: Option<usize>,
}

/// One episode of `algo` on `instance` with `budget` pulls.
pub fn run_once(
    algo: Algo,
    instance: &BanditInstance,
    budget: u64,
    seed: u64,
    config: &AlgoConfig,
) -> Result<RunResult> {
    let mut env = Environment::new(instance.clone(), seed).with_budget_cap(budget);
    let mut r = rng::stream(seed, rng::TAG_ALGO, 0);
    let tau = instance.tau();
    let sigma = instance.sigma();
    let mtb_config = |dec: bool| {
        let mut c = MtbConfig::new(tau, budget, sigma);
        c.epsilon_rule = config.epsilon_rule;
        if dec {
            c.decreasing()
        } else {
            c
        }
    };
    let (qhat, khat) = match algo {
        Algo::Uniform => (uniform_run(&mut env, tau, budget)?, None),
        Algo::Mtb | Algo::DecMtb => {
            let out = mtb_run(&mut env, &mtb_config(algo == Algo::DecMtb), &mut r)?;
            (out.qhat, Some(out.khat))
        }
        Algo::Utb => (utb_run(&mut env, tau, budget, &mut r)?.qhat, None),
        Algo::Ctb => (ctb_run(&mut env, tau, budget, config.ctb_constant, &mut r)?.qhat, None),
    };
    let regret = simple_regret(instance, &qhat)?;
    let pulls = env.pulls_used();
    debug_assert!(pulls <= budget);
    Ok(RunResult { qhat, regret, pulls, per_arm: env.per_arm_counts().to_vec(), khat })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub reps: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(reps)`.
    pub se: f64,
    /// Nearest-rank 90th percentile of the per-episode regrets.
    pub p90: f64,
    pub mean_pulls: f64,
}

impl Estimate {
    pub fn from_samples(regrets: &[f64], pulls: &[u64]) -> Result<Estimate> {
        let n = regrets.len();
        if n < 2 {
            return Err(Error::param("an estimate needs at least 2 repetitions"));
        }
        let nf = n as f64;
        let mean = regrets.iter().sum::<f64>() / nf;
        let var = regrets.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        let mut sorted = regrets.to_vec();
        sorted.sort_by(f64::total_cmp);
        let p90 = sorted[((0.9 * nf).ceil() as usize).clamp(1, n) - 1];
        let mean_pulls = pulls.iter().map(|&p| p as f64).sum::<f64>() / nf;
        Ok(Estimate { reps: n, mean, se: (var / nf).sqrt(), p90, mean_pulls })
    }
}

/// Seed of repetition `rep`; the algorithm tag keeps cells of different
/// algorithms independent of each other.
pub fn rep_seed(master: u64, algo: Algo, rep: usize) -> u64 {
    rng::derive_seed(master, algo.as_str(), rep as u64)
}

/// Per-repetition results, in repetition order.
pub fn run_reps(
    algo: Algo,
    instance: &BanditInstance,
    budget: u64,
    reps: usize,
    master_seed: u64,
    config: &AlgoConfig,
) -> Result<Vec<RunResult>> {
    (0..reps)
        .into_par_iter()
        .map(|rep| run_once(algo, instance, budget, rep_seed(master_seed, algo, rep), config))
        .collect()
}

pub fn estimate_regret(
    algo: Algo,
    instance: &BanditInstance,
    budget: u64,
    reps: usize,
    master_seed: u64,
    config: &AlgoConfig,
) -> Result<Estimate> {
    if reps < 2 {
        return Err(Error::param("an estimate needs at least 2 repetitions"));
    }
    let runs = run_reps(algo, instance, budget, reps, master_seed, config)?;
    let regrets: Vec<f64> = runs.iter().map(|r| r.regret).collect();
    let pulls: Vec<u64> = runs.iter().map(|r| r.pulls).collect();
    Estimate::from_samples(&regrets, &pulls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Shape;

    #[test]
    fn noiseless_uniform_is_exact() {
        let i = BanditInstance::deterministic(&[0.1, 0.9, 0.4], 0.5, Shape::None).unwrap();
        let e = estimate_regret(Algo::Uniform, &i, 3, 50, 1, &AlgoConfig::default()).unwrap();
        assert_eq!((e.mean, e.se, e.p90), (0.0, 0.0, 0.0));
        assert_eq!(e.mean_pulls, 3.0);
    }

    #[test]
    fn run_once_is_repeatable() {
        let means: Vec<f64> = (0..100).map(|j| j as f64 / 100.0).collect();
        let i = BanditInstance::gaussian(&means, 1.0, 0.37, Shape::Monotone).unwrap();
        let c = AlgoConfig::default();
        let a = run_once(Algo::Mtb, &i, 10_000, 4, &c).unwrap();
        assert_eq!(a, run_once(Algo::Mtb, &i, 10_000, 4, &c).unwrap());
        assert_eq!(a.pulls, 9996);
    }

    #[test]
    fn estimate_statistics() {
        let e = Estimate::from_samples(&[0.0, 1.0, 0.0, 1.0], &[3, 3, 3, 5]).unwrap();
        assert_eq!(e.mean, 0.5);
        assert!((e.se - (1.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(e.p90, 1.0);
        assert_eq!(e.mean_pulls, 3.5);
        assert!(Estimate::from_samples(&[1.0], &[1]).is_err());
    }

    #[test]
    fn algo_names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.as_str().parse::<Algo>().unwrap(), a);
        }
        assert!("moss".parse::<Algo>().is_err());
    }
}

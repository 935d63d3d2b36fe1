//! Thresholding on unimodal mean sequences.
//!
//! A top-1 search locates the mode `m`, the monotone search finds the left
//! crossing on `1..=m` and the mirrored search the right crossing on
//! `m..=K`. Fresh samples then check that the interval between the two
//! crossings really sits above the threshold; otherwise nothing is
//! classified above.

use rand::Rng;

use crate::baseline::{moss_on, uniform_run};
use crate::env::{ArmRef, Environment};
use crate::error::{Error, Result};
use crate::mtb::{self, run_on_line, MtbConfig};
use crate::problem::Classification;

/// Smallest budget that runs the staged algorithm; below it `utb_run`
/// falls back to [`uniform_run`].
pub fn utb_min_budget(k: usize) -> u64 {
    40u64.max(4 * k as u64).max(8 * mtb::min_budget(k))
}

/// `(top-1, left search, right search, per verification sample)`.
pub fn stage_budgets(budget: u64) -> (u64, u64, u64, u64) {
    (budget / 4, budget / 8, budget / 8, budget / 10)
}

/// Empirical means drawn for the verification step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub mu_m: f64,
    pub mu_l: f64,
    pub mu_r: f64,
    pub mu_before_l: f64,
    pub mu_after_r: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtbStages {
    pub m_hat: usize,
    /// First arm of `1..=m_hat` classified above; `m_hat + 1` if none.
    pub l_hat: usize,
    /// Last arm of `m_hat..=K` classified above; `m_hat - 1` if none.
    pub r_hat: usize,
    pub verification: Verification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtbOutput {
    pub qhat: Classification,
    /// `None` when the budget forced the uniform fallback.
    pub stages: Option<UtbStages>,
}

/// Arm index `0..=K+1` to something pullable; both outer positions are the
/// `Low` arm since a unimodal sequence falls off on both sides.
fn resolve(idx: usize, k: usize) -> ArmRef {
    if (1..=k).contains(&idx) {
        ArmRef::Arm(idx)
    } else {
        ArmRef::Low
    }
}

pub fn utb_run<R: Rng + ?Sized>(env: &mut Environment, tau: f64, budget: u64, rng: &mut R) -> Result<UtbOutput> {
    let k = env.k();
    if budget > env.remaining() {
        return Err(Error::BudgetExhausted { requested: budget, remaining: env.remaining() });
    }
    if budget < utb_min_budget(k) {
        let qhat = uniform_run(env, tau, budget)?;
        return Ok(UtbOutput { qhat, stages: None });
    }
    let sigma = env.instance().sigma();
    let (b_top, b_left, b_right, b_ver) = stage_budgets(budget);

    let all: Vec<usize> = (1..=k).collect();
    let m_hat = moss_on(env, &all, b_top, sigma, rng)?.arm;

    let left: Vec<usize> = (1..=m_hat).collect();
    let l_hat = run_on_line(env, &left, &MtbConfig::new(tau, b_left, sigma), rng)?.khat;

    let right: Vec<usize> = (m_hat..=k).rev().collect();
    let j = run_on_line(env, &right, &MtbConfig::new(tau, b_right, sigma), rng)?.khat;
    let r_hat = k + 1 - j;

    let mut mean = |idx: usize| env.sample_mean(resolve(idx, k), b_ver);
    let mu_m = mean(m_hat)?;
    let mu_l = mean(l_hat)?;
    let mu_r = mean(r_hat)?;
    let mu_before_l = mean(l_hat - 1)?;
    let mu_after_r = mean(r_hat + 1)?;

    let left_ok = (mu_before_l < tau && tau < mu_l) || (mu_l - tau).abs() <= mu_m - tau;
    let right_ok = (mu_after_r < tau && tau < mu_r) || (mu_r - tau).abs() <= mu_m - tau;
    let passed = left_ok && right_ok;
    let qhat = if passed && l_hat <= r_hat {
        Classification::interval(k, l_hat.max(1), r_hat.min(k))
    } else {
        Classification::all_below(k)
    };
    let verification = Verification { mu_m, mu_l, mu_r, mu_before_l, mu_after_r, passed };
    Ok(UtbOutput { qhat, stages: Some(UtbStages { m_hat, l_hat, r_hat, verification }) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{simple_regret, BanditInstance, Shape};
    use crate::rng;

    fn run(i: &BanditInstance, budget: u64, seed: u64) -> (UtbOutput, u64) {
        let mut env = Environment::new(i.clone(), seed).with_budget_cap(budget);
        let mut r = rng::stream(seed, rng::TAG_ALGO, 0);
        let out = utb_run(&mut env, i.tau(), budget, &mut r).unwrap();
        (out, env.pulls_used())
    }

    #[test]
    fn noiseless_peak_is_isolated() {
        let i = BanditInstance::deterministic_with_sigma(&[0., 1., 2., 1., 0.], 1.5, Shape::Unimodal, 0.01).unwrap();
        for seed in 0..20 {
            let (out, _) = run(&i, 100_000, seed);
            let s = out.stages.unwrap();
            assert_eq!((s.l_hat, s.r_hat), (3, 3));
            assert!(s.verification.passed);
            assert_eq!(out.qhat.labels(), &[-1, -1, 1, -1, -1]);
            assert_eq!(simple_regret(&i, &out.qhat).unwrap(), 0.0);
        }
    }

    #[test]
    fn noiseless_all_below_gives_empty_set() {
        let i = BanditInstance::deterministic_with_sigma(&[0., 1., 2., 1., 0.], 2.5, Shape::Unimodal, 0.01).unwrap();
        for seed in 0..20 {
            let (out, _) = run(&i, 100_000, seed);
            assert!(!out.stages.unwrap().verification.passed);
            assert_eq!(out.qhat, Classification::all_below(5));
        }
    }

    #[test]
    fn pulls_respect_stage_arithmetic() {
        let i = BanditInstance::bernoulli(&[0.1, 0.3, 0.6, 0.7, 0.4, 0.2], 0.5, Shape::Unimodal).unwrap();
        for budget in [1000u64, 1237, 5001] {
            let (b1, b2, b3, b4) = stage_budgets(budget);
            for seed in 0..10 {
                let (_, pulls) = run(&i, budget, seed);
                assert!(pulls <= b1 + b2 + b3 + 5 * b4);
                assert!(pulls <= budget);
            }
        }
    }

    #[test]
    fn small_budget_falls_back_to_uniform() {
        let i = BanditInstance::bernoulli(&[0.1, 0.6, 0.2], 0.5, Shape::Unimodal).unwrap();
        let (out, pulls) = run(&i, 39, 0);
        assert!(out.stages.is_none());
        assert_eq!(pulls, 39);
    }

    #[test]
    fn mode_at_the_edge() {
        // decreasing instance: the left search runs on a single arm
        let i = BanditInstance::deterministic_with_sigma(&[3., 2., 1., 0.], 1.5, Shape::Unimodal, 0.01).unwrap();
        for seed in 0..10 {
            let (out, _) = run(&i, 50_000, seed);
            assert_eq!(simple_regret(&i, &out.qhat).unwrap(), 0.0);
        }
    }
}

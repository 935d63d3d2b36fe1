//! Unstructured baseline and the top-1 subroutine used by the unimodal
//! solver.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;

use crate::env::{ArmRef, Environment};
use crate::error::{Error, Result};
use crate::mtb::check_pac_params;
use crate::problem::Classification;

/// Pulls every arm `floor(budget / K)` times and classifies by empirical
/// mean (`>= tau` is `+1`). Leftover pulls are not spent.
pub fn uniform_run(env: &mut Environment, tau: f64, budget: u64) -> Result<Classification> {
    let arms: Vec<usize> = (1..=env.k()).collect();
    uniform_on(env, &arms, tau, budget)
}

/// [`uniform_run`] restricted to `arms`; the result is indexed like the
/// full instance, with arms outside `arms` labeled `-1`.
pub(crate) fn uniform_on(env: &mut Environment, arms: &[usize], tau: f64, budget: u64) -> Result<Classification> {
    let k = arms.len() as u64;
    let n = budget / k;
    if n == 0 {
        return Err(Error::BudgetExhausted { requested: k, remaining: budget });
    }
    if k * n > env.remaining() {
        return Err(Error::BudgetExhausted { requested: k * n, remaining: env.remaining() });
    }
    let mut above = vec![false; env.k()];
    for &a in arms {
        above[a - 1] = env.sample_mean(ArmRef::Arm(a), n)? >= tau;
    }
    Ok(Classification::from_above(above))
}

/// `floor(2 s^2 K ln(2K / delta) / e^2) + K`.
pub fn uniform_fc_budget(k: usize, epsilon: f64, delta: f64, sigma: f64) -> Result<u64> {
    if k == 0 {
        return Err(Error::param("K must be positive"));
    }
    check_pac_params(epsilon, delta, sigma)?;
    let kf = k as f64;
    let t = 2.0 * sigma * sigma * kf * (2.0 * kf / delta).ln() / (epsilon * epsilon);
    Ok(t.floor() as u64 + k as u64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Index {
    value: f64,
    arm: usize,
}

impl Eq for Index {}

impl Ord for Index {
    // max-heap on the index value, lowest arm first among ties
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then_with(|| other.arm.cmp(&self.arm))
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopOneOutput {
    /// Recommended arm (1-based, in the labels of the full instance).
    pub arm: usize,
    /// Pulls per candidate arm, in the order given.
    pub counts: Vec<u64>,
}

/// MOSS with a randomized recommendation: one pull per arm, then the arm
/// maximizing `mu_hat + sigma * sqrt(max(0, ln(n / (K N))) / N)` until the
/// budget `n` is spent; the answer is drawn with probability `N_k / n`.
pub fn moss_top1<R: Rng + ?Sized>(env: &mut Environment, budget: u64, rng: &mut R) -> Result<usize> {
    let arms: Vec<usize> = (1..=env.k()).collect();
    moss_on(env, &arms, budget, env.instance().sigma(), rng).map(|o| o.arm)
}

pub fn moss_on<R: Rng + ?Sized>(
    env: &mut Environment,
    arms: &[usize],
    budget: u64,
    sigma: f64,
    rng: &mut R,
) -> Result<TopOneOutput> {
    let k = arms.len();
    if k == 0 {
        return Err(Error::DegenerateProblem("top-1 search over zero arms".into()));
    }
    if budget < k as u64 {
        return Err(Error::BudgetExhausted { requested: k as u64, remaining: budget });
    }
    if budget > env.remaining() {
        return Err(Error::BudgetExhausted { requested: budget, remaining: env.remaining() });
    }
    let scale = budget as f64 / k as f64;
    let index = |sum: f64, n: u64| {
        let n = n as f64;
        sum / n + sigma * ((scale / n).ln().max(0.0) / n).sqrt()
    };
    let mut sums = vec![0.0; k];
    let mut counts = vec![1u64; k];
    let mut heap = BinaryHeap::with_capacity(k);
    for (j, &a) in arms.iter().enumerate() {
        sums[j] = env.pull(ArmRef::Arm(a))?;
        heap.push(Index { value: index(sums[j], 1), arm: j });
    }
    // indices depend only on each arm's own statistics, so only the pulled
    // arm needs re-inserting
    for _ in k as u64..budget {
        let Index { arm: j, .. } = heap.pop().expect("non-empty");
        sums[j] += env.pull(ArmRef::Arm(arms[j]))?;
        counts[j] += 1;
        heap.push(Index { value: index(sums[j], counts[j]), arm: j });
    }
    let mut u = rng.random_range(0..budget);
    let mut pick = k - 1;
    for (j, &c) in counts.iter().enumerate() {
        if u < c {
            pick = j;
            break;
        }
        u -= c;
    }
    Ok(TopOneOutput { arm: arms[pick], counts })
}

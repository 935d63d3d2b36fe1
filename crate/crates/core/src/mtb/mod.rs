//! Thresholding on nondecreasing mean sequences.
//!
//! [`explore`] runs a noisy binary search with backtracking over the arms
//! (padded with two boundary arms), [`choose`] takes the lower median of the
//! arms that looked close to the threshold during the walk, and the
//! classification is the step function at that arm. Nonincreasing
//! sequences are handled by relabeling arm `i` as `K + 1 - i`.

mod choose;
mod explore;

pub use choose::{candidate_list, choose, epsilon_hat, epsilon_hat_with, qualifying, EpsilonRule};
pub use explore::{eps0, explore, ArmLine, ExploreHistory, ExploreStep};

use rand::Rng;

use crate::env::{ArmRef, Environment};
use crate::error::{Error, Result};
use crate::problem::Classification;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MtbConfig {
    pub tau: f64,
    pub budget: u64,
    pub sigma: f64,
    pub direction: Direction,
    pub epsilon_rule: EpsilonRule,
    /// Pad the search line with the `Low`/`High` boundary arms.
    pub sentinels: bool,
}

impl MtbConfig {
    pub fn new(tau: f64, budget: u64, sigma: f64) -> Self {
        MtbConfig {
            tau,
            budget,
            sigma,
            direction: Direction::Increasing,
            epsilon_rule: EpsilonRule::Threshold,
            sentinels: true,
        }
    }

    pub fn decreasing(mut self) -> Self {
        self.direction = Direction::Decreasing;
        self
    }
}

/// `ceil(6 ln K)`.
pub fn t1_for(k: usize) -> usize {
    (6.0 * (k as f64).ln()).ceil() as usize
}

/// `(T1, T2)` for `K` arms and budget `T`: `T1 = ceil(6 ln K)`,
/// `T2 = floor(T / (3 T1))`.
pub fn phase_lengths(k: usize, budget: u64) -> (usize, u64) {
    let t1 = t1_for(k);
    (t1, budget / (3 * t1 as u64))
}

/// Smallest budget `mtb_run` accepts for `K` arms.
pub fn min_budget(k: usize) -> u64 {
    if k <= 2 {
        k as u64
    } else {
        3 * t1_for(k) as u64
    }
}

/// Diagnostics of a non-degenerate run.
#[derive(Debug, Clone, PartialEq)]
pub struct MtbTrace {
    pub history: ExploreHistory,
    pub line: ArmLine,
    pub eps_hat: f64,
    /// Position returned by the median step (`None` if the list was empty).
    pub chosen: Option<usize>,
}

/// Outcome on an ordered sub-line of arms, in that line's own labels:
/// `khat` in `1..=K' + 1`, where `K' + 1` means "no arm at or above".
#[derive(Debug, Clone, PartialEq)]
pub struct LineOutcome {
    pub khat: usize,
    pub trace: Option<MtbTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MtbOutput {
    /// Increasing: the first arm classified `+1` (`K + 1` if none).
    /// Decreasing: the last arm classified `+1` (`0` if none).
    pub khat: usize,
    pub qhat: Classification,
    pub trace: Option<MtbTrace>,
}

/// Runs the monotone search on `arms`, which are listed so that their means
/// are nondecreasing along the list.
pub fn run_on_line<R: Rng + ?Sized>(
    env: &mut Environment,
    arms: &[usize],
    config: &MtbConfig,
    rng: &mut R,
) -> Result<LineOutcome> {
    let k = arms.len();
    if k == 0 {
        return Err(Error::DegenerateProblem("monotone search over zero arms".into()));
    }
    if k <= 2 {
        return degenerate_fallback(env, arms, config).map(|khat| LineOutcome { khat, trace: None });
    }
    let (t1, t2) = phase_lengths(k, config.budget);
    if t2 == 0 {
        return Err(Error::BudgetExhausted { requested: min_budget(k), remaining: config.budget });
    }
    let refs = arms.iter().map(|&a| ArmRef::Arm(a));
    let line = if config.sentinels { ArmLine::padded(refs) } else { ArmLine::plain(refs) };
    let history = explore(env, &line, config.tau, t1, t2, config.sigma)?;
    let eps_hat = epsilon_hat_with(&history, config.tau, config.epsilon_rule, |pos| match line.arm(pos) {
        ArmRef::Arm(a) => Some(env.instance().arm(a).mean()),
        _ => None,
    });
    let chosen = choose(eps_hat, &history, config.tau, rng);
    // an empty list falls back to the middle of the last visited node
    let pos = chosen.unwrap_or_else(|| history.steps.last().expect("t1 >= 1").node.m);
    let khat = line.label(pos).max(1);
    Ok(LineOutcome { khat, trace: Some(MtbTrace { history, line, eps_hat, chosen }) })
}

/// `K <= 2`: split the budget evenly, classify by empirical mean, and
/// report the first arm at or above the threshold.
fn degenerate_fallback(env: &mut Environment, arms: &[usize], config: &MtbConfig) -> Result<usize> {
    let k = arms.len() as u64;
    let n = config.budget / k;
    if n == 0 {
        return Err(Error::BudgetExhausted { requested: k, remaining: config.budget });
    }
    for (j, &a) in arms.iter().enumerate() {
        if env.sample_mean(ArmRef::Arm(a), n)? >= config.tau {
            // remaining arms are still pulled so the pull count is fixed
            for &b in &arms[j + 1..] {
                env.sample_mean(ArmRef::Arm(b), n)?;
            }
            return Ok(j + 1);
        }
    }
    Ok(arms.len() + 1)
}

/// Full-instance run. Pulls never exceed `config.budget`.
pub fn mtb_run<R: Rng + ?Sized>(env: &mut Environment, config: &MtbConfig, rng: &mut R) -> Result<MtbOutput> {
    let k = env.k();
    if k == 0 {
        return Err(Error::DegenerateProblem("K = 0".into()));
    }
    if config.budget > env.remaining() {
        return Err(Error::BudgetExhausted { requested: config.budget, remaining: env.remaining() });
    }
    match config.direction {
        Direction::Increasing => {
            let arms: Vec<usize> = (1..=k).collect();
            let out = run_on_line(env, &arms, config, rng)?;
            Ok(MtbOutput { khat: out.khat, qhat: Classification::step(k, out.khat), trace: out.trace })
        }
        Direction::Decreasing => {
            let arms: Vec<usize> = (1..=k).rev().collect();
            let out = run_on_line(env, &arms, config, rng)?;
            let khat = k + 1 - out.khat;
            Ok(MtbOutput { khat, qhat: Classification::interval(k, 1, khat), trace: out.trace })
        }
    }
}

/// `(epsilon, delta)`-PAC budget for the monotone search:
/// `floor(21 s^2 ln K / e^2 + 12 ln K)` when `delta >= K^(-3/4)`, else
/// `floor(432 s^2 ln K ln(9/delta) / e^2 + 12 ln K)`.
pub fn mtb_fc_budget(k: usize, epsilon: f64, delta: f64, sigma: f64) -> Result<u64> {
    if k < 2 {
        return Err(Error::param(format!("K = {k}; the budget formula needs K >= 2")));
    }
    check_pac_params(epsilon, delta, sigma)?;
    let ln_k = (k as f64).ln();
    let s2 = sigma * sigma;
    let t = if delta >= (k as f64).powf(-0.75) {
        21.0 * s2 * ln_k / (epsilon * epsilon) + 12.0 * ln_k
    } else {
        432.0 * s2 * ln_k * (9.0 / delta).ln() / (epsilon * epsilon) + 12.0 * ln_k
    };
    Ok(t.floor() as u64)
}

pub(crate) fn check_pac_params(epsilon: f64, delta: f64, sigma: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::param(format!("epsilon = {epsilon} must be positive")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta = {delta} must lie in (0, 1)")));
    }
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::param(format!("sigma = {sigma} must be nonnegative")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnytimeOutput {
    pub khat: usize,
    pub qhat: Classification,
    /// Runs that finished before the stop.
    pub completed_runs: usize,
    /// Budget of the last finished run (0 if none finished).
    pub last_budget: u64,
}

/// Doubling-trick wrapper: runs the search from scratch with budgets
/// `B, 2B, 4B, ...` where `B = floor(6 ln K) + 1`, until the environment
/// stops it (stop signal or budget cap), and answers with the last run that
/// finished. Budgets below [`min_budget`] are skipped without pulling. With
/// no finished run the answer is the `K <= 2` style fallback on whatever
/// budget is left, or all arms below when nothing is left.
pub fn mtb_anytime<R: Rng + ?Sized>(
    env: &mut Environment,
    tau: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<AnytimeOutput> {
    let k = env.k();
    if env.budget_cap().is_none() && !env.has_stop_signal() {
        return Err(Error::param("anytime run needs a stop signal or a budget cap"));
    }
    let mut budget = anytime_initial_budget(k);
    let mut last: Option<(MtbOutput, u64)> = None;
    let mut completed = 0;
    loop {
        if budget < min_budget(k) {
            budget *= 2;
            continue;
        }
        let config = MtbConfig::new(tau, budget, sigma);
        match mtb_run(env, &config, rng) {
            Ok(out) => {
                last = Some((out, budget));
                completed += 1;
                budget = budget.saturating_mul(2);
            }
            Err(Error::Stopped { .. }) | Err(Error::BudgetExhausted { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(match last {
        Some((out, b)) => AnytimeOutput { khat: out.khat, qhat: out.qhat, completed_runs: completed, last_budget: b },
        None => AnytimeOutput {
            khat: k + 1,
            qhat: Classification::all_below(k),
            completed_runs: 0,
            last_budget: 0,
        },
    })
}

/// `floor(6 ln K) + 1`.
pub fn anytime_initial_budget(k: usize) -> u64 {
    (6.0 * (k as f64).ln()).floor() as u64 + 1
}

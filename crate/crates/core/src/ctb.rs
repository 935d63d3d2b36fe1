//! Thresholding on concave mean sequences.
//!
//! The level set of a concave sequence is an interval `[l, r]`. Phases with
//! shrinking tolerance `eps_i = (7/8)^i` move `l` right and `r` left by
//! running the monotone search on geometrically spaced arms (the log-set),
//! and the final interval is read off the per-phase samples.

use rand::Rng;

use crate::baseline::uniform_run;
use crate::env::{ArmRef, Environment};
use crate::error::{Error, Result};
use crate::mtb::{self, run_on_line, MtbConfig};
use crate::problem::Classification;

/// Default scale of the phase lengths.
pub const DEFAULT_CONSTANT: f64 = 16384.0;

/// Pulls per phase in units of `T2`: five sampled arms plus two searches.
pub const COST_FACTOR: u64 = 7;

const MAX_PHASES: usize = 4096;

/// Offsets `d` with `l + d` in the log-set of `(l, r)`.
fn log_offsets(width: usize) -> Vec<usize> {
    let mut out = vec![0];
    if width == 0 {
        return out;
    }
    // smallest a with 2^a <= width <= 2^(a+1)
    let a = (usize::BITS - (width - 1).leading_zeros()).saturating_sub(1) as usize;
    let cap = width / 2;
    for j in 0..=a {
        out.push((1usize << j).min(cap));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `{l} ∪ {min(l + 2^j, floor((l + r) / 2)) : 0 <= j <= a}`, ascending,
/// where `a` is the smallest integer with `l + 2^a <= r <= l + 2^(a+1)`.
pub fn log_set(l: usize, r: usize) -> Result<Vec<usize>> {
    if l > r {
        return Err(Error::InvalidRange { l, r });
    }
    Ok(log_offsets(r - l).into_iter().map(|d| l + d).collect())
}

/// The log-set built from `r` inward: `{r - d}` for the offsets of
/// `(l, r)`, listed from `r` down, all in `ceil((l + r) / 2)..=r`.
pub fn mirrored_log_set(l: usize, r: usize) -> Result<Vec<usize>> {
    if l > r {
        return Err(Error::InvalidRange { l, r });
    }
    Ok(log_offsets(r - l).into_iter().map(|d| r - d).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CtbSchedule {
    pub m_phases: usize,
    /// `eps[i - 1] = (7/8)^i`.
    pub eps: Vec<f64>,
    /// `delta[i - 1] = 2^(i - M)`.
    pub delta: Vec<f64>,
    pub t2: Vec<u64>,
    pub constant_c: f64,
}

impl CtbSchedule {
    /// `tau - (3/4) eps_i` for every phase.
    pub fn thresholds(&self, tau: f64) -> Vec<f64> {
        self.eps.iter().map(|e| tau - 0.75 * e).collect()
    }

    pub fn total_pulls(&self) -> u64 {
        COST_FACTOR * self.t2.iter().sum::<u64>()
    }
}

fn phase_eps(i: usize) -> f64 {
    0.875f64.powi(i as i32)
}

fn loglog(k: usize) -> f64 {
    (k as f64).ln().ln().max(1.0)
}

/// `floor(c * max(1, ln ln K) / eps_i^2 * ln(1 / delta_i^2))` for
/// `i = 1..=m`, with `delta_i = 2^(i - m)`.
fn phase_lengths(k: usize, m: usize, c: f64) -> Vec<u64> {
    let ll = loglog(k);
    (1..=m)
        .map(|i| {
            let e = phase_eps(i);
            let log_term = 2.0 * (m - i) as f64 * std::f64::consts::LN_2;
            (c * ll / (e * e) * log_term).floor() as u64
        })
        .collect()
}

/// The largest phase count `M` whose pulls fit in `budget`, with every
/// per-phase list instantiated at `M`. `M = 0` when not even one phase fits.
pub fn ctb_schedule(k: usize, budget: u64, constant_c: f64) -> Result<CtbSchedule> {
    if k < 3 {
        return Err(Error::param(format!("the concave schedule needs K >= 3, got {k}")));
    }
    if !(constant_c > 0.0) || !constant_c.is_finite() {
        return Err(Error::param(format!("constant_c = {constant_c} must be positive")));
    }
    let fits = |m: usize| {
        let t2 = phase_lengths(k, m, constant_c);
        (t2.iter().fold(0u64, |s, &x| s.saturating_add(x))).saturating_mul(COST_FACTOR) <= budget
    };
    let mut m = 0;
    while m < MAX_PHASES && fits(m + 1) {
        m += 1;
    }
    Ok(CtbSchedule {
        m_phases: m,
        eps: (1..=m).map(phase_eps).collect(),
        delta: (1..=m).map(|i| 2f64.powi(i as i32 - m as i32)).collect(),
        t2: phase_lengths(k, m, constant_c),
        constant_c,
    })
}

/// Indices and fresh empirical means recorded at the start of a phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord {
    pub phase: usize,
    pub eps: f64,
    pub l: usize,
    pub m: usize,
    pub r: usize,
    pub mu_l: f64,
    pub mu_before_l: f64,
    pub mu_r: f64,
    pub mu_after_r: f64,
    pub mu_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CtbOutput {
    pub qhat: Classification,
    /// `(l_hat, r_hat)` when the decision rule returned a non-empty set.
    pub interval: Option<(usize, usize)>,
    pub phases: Vec<PhaseRecord>,
    /// `None` when the budget forced the uniform fallback.
    pub schedule: Option<CtbSchedule>,
}

/// Index `0..=K+1` to a pullable arm; outside the instance the sequence is
/// treated as `-inf`.
fn resolve(idx: usize, k: usize) -> ArmRef {
    if (1..=k).contains(&idx) {
        ArmRef::Arm(idx)
    } else {
        ArmRef::Low
    }
}

/// First arm of `arms` at or above the threshold, or the last arm of the
/// list if the search says none is. `None` if the budget cannot run it.
fn search<R: Rng + ?Sized>(
    env: &mut Environment,
    arms: &[usize],
    config: &MtbConfig,
    rng: &mut R,
) -> Result<Option<usize>> {
    if config.budget < mtb::min_budget(arms.len()) {
        return Ok(None);
    }
    let j = run_on_line(env, arms, config, rng)?.khat;
    Ok(Some(arms[(j - 1).min(arms.len() - 1)]))
}

pub fn ctb_run<R: Rng + ?Sized>(
    env: &mut Environment,
    tau: f64,
    budget: u64,
    constant_c: f64,
    rng: &mut R,
) -> Result<CtbOutput> {
    let k = env.k();
    if budget > env.remaining() {
        return Err(Error::BudgetExhausted { requested: budget, remaining: env.remaining() });
    }
    let schedule = if k >= 3 { Some(ctb_schedule(k, budget, constant_c)?) } else { None };
    let schedule = match schedule {
        Some(s) if s.t2.iter().any(|&t| t > 0) => s,
        _ => {
            let qhat = uniform_run(env, tau, budget)?;
            return Ok(CtbOutput { qhat, interval: None, phases: Vec::new(), schedule: None });
        }
    };
    let sigma = env.instance().sigma();
    let thresholds = schedule.thresholds(tau);
    let (mut l, mut r) = (1, k);
    let mut phases = Vec::with_capacity(schedule.m_phases);
    for (idx, &t2) in schedule.t2.iter().enumerate() {
        if t2 == 0 {
            continue;
        }
        let m = (l + r) / 2;
        let mut mean = |i: usize| env.sample_mean(resolve(i, k), t2);
        let mu_l = mean(l)?;
        let mu_before_l = mean(l - 1)?;
        let mu_r = mean(r)?;
        let mu_after_r = mean(r + 1)?;
        let mu_m = mean(m)?;
        phases.push(PhaseRecord {
            phase: idx + 1,
            eps: schedule.eps[idx],
            l,
            m,
            r,
            mu_l,
            mu_before_l,
            mu_r,
            mu_after_r,
            mu_m,
        });

        let config = MtbConfig::new(thresholds[idx], t2, sigma);
        let new_l = search(env, &log_set(l, r)?, &config, rng)?.unwrap_or(l);
        let new_r = search(env, &mirrored_log_set(l, r)?, &config, rng)?.unwrap_or(r);
        l = new_l;
        r = new_r;
    }
    let interval = decide(&phases, tau);
    let qhat = match interval {
        Some((lo, hi)) => Classification::interval(k, lo, hi),
        None => Classification::all_below(k),
    };
    Ok(CtbOutput { qhat, interval, phases, schedule: Some(schedule) })
}

/// The final interval from the phase records, or `None` for the empty set.
pub fn decide(phases: &[PhaseRecord], tau: f64) -> Option<(usize, usize)> {
    let in_m: Vec<usize> = phases.iter().filter(|p| p.mu_m >= tau + 2.0 * p.eps).map(|p| p.m).collect();
    let lo = *in_m.iter().min()?;
    let hi = *in_m.iter().max()?;
    let l_hat = phases
        .iter()
        .filter(|p| p.mu_l >= tau - 2.0 * p.eps && p.mu_before_l <= tau - p.eps / 4.0)
        .map(|p| p.l)
        .filter(|&l| l <= lo)
        .max()?;
    let r_hat = phases
        .iter()
        .filter(|p| p.mu_r >= tau - 2.0 * p.eps && p.mu_after_r <= tau - p.eps / 4.0)
        .map(|p| p.r)
        .filter(|&r| r >= hi)
        .min()?;
    Some((l_hat, r_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{simple_regret, BanditInstance, Shape};
    use crate::rng;

    #[test]
    fn log_set_examples() {
        assert_eq!(log_set(1, 100).unwrap(), vec![1, 2, 3, 5, 9, 17, 33, 50]);
        assert_eq!(log_set(1, 3).unwrap(), vec![1, 2]);
        assert_eq!(log_set(1, 2).unwrap(), vec![1]);
        assert_eq!(log_set(4, 4).unwrap(), vec![4]);
        assert!(matches!(log_set(5, 4), Err(Error::InvalidRange { l: 5, r: 4 })));
    }

    #[test]
    fn mirrored_set_lies_in_the_right_half() {
        assert_eq!(mirrored_log_set(1, 100).unwrap(), vec![100, 99, 98, 96, 92, 84, 68, 51]);
        for l in 1..40 {
            for r in l..80 {
                let s = mirrored_log_set(l, r).unwrap();
                assert!(s.iter().all(|&x| (l + r).div_ceil(2) <= x && x <= r));
                assert!(s.len() as f64 <= ((r - l).max(1) as f64).log2() + 3.0);
            }
        }
    }

    #[test]
    fn schedule_arithmetic() {
        let s = ctb_schedule(256, 1_000_000, 4.0).unwrap();
        assert!((s.eps[0] - 0.875).abs() < 1e-15);
        assert!((s.thresholds(0.0)[0] + 0.65625).abs() < 1e-15);
        assert!(s.total_pulls() <= 1_000_000);
        assert_eq!(*s.t2.last().unwrap(), 0);
        assert!(s.delta.windows(2).all(|w| w[1] == 2.0 * w[0]));
    }

    #[test]
    fn default_constant_is_infeasible_at_desk_scale() {
        let s = ctb_schedule(64, 100_000, DEFAULT_CONSTANT).unwrap();
        assert!(s.t2.iter().all(|&t| t == 0));
    }

    #[test]
    fn all_below_gives_empty_set() {
        let i = BanditInstance::deterministic_with_sigma(&[0., 0.5, 0.8, 0.9, 0.8, 0.5], 1.9, Shape::Concave, 0.01)
            .unwrap();
        let mut env = Environment::new(i.clone(), 0).with_budget_cap(200_000);
        let mut r = rng::stream(0, rng::TAG_ALGO, 0);
        let out = ctb_run(&mut env, 1.9, 200_000, 1.0, &mut r).unwrap();
        assert!(out.schedule.is_some());
        assert_eq!(out.interval, None);
        assert_eq!(simple_regret(&i, &out.qhat).unwrap(), 0.0);
        assert!(env.pulls_used() <= 200_000);
    }

    #[test]
    fn tiny_k_falls_back() {
        let i = BanditInstance::bernoulli(&[0.2, 0.7], 0.5, Shape::Concave).unwrap();
        let mut env = Environment::new(i, 0);
        let mut r = rng::stream(0, rng::TAG_ALGO, 0);
        let out = ctb_run(&mut env, 0.5, 100, 4.0, &mut r).unwrap();
        assert!(out.schedule.is_none());
        assert_eq!(env.pulls_used(), 100);
    }

    #[test]
    fn decision_rule_picks_bracketing_endpoints() {
        let rec = |phase, eps, l, m, r, mu_m| PhaseRecord {
            phase,
            eps,
            l,
            m,
            r,
            mu_l: 1.0,
            mu_before_l: 0.0,
            mu_r: 1.0,
            mu_after_r: 0.0,
            mu_m,
        };
        let phases = [rec(1, 0.1, 1, 5, 10, 0.0), rec(2, 0.05, 3, 5, 8, 2.0), rec(3, 0.04, 4, 6, 8, 2.0)];
        // I_m = {5, 6}; l_hat = max{1, 3, 4} <= 5 is 4; r_hat = min{10, 8} >= 6 is 8
        assert_eq!(decide(&phases, 0.5), Some((4, 8)));
        assert_eq!(decide(&phases[..1], 0.5), None);
    }
}

//! The sampling environment: a seeded reward stream over one instance, with
//! per-arm pull accounting and an optional hard budget cap.
//!
//! Besides the `K` real arms the environment serves two virtual arms with
//! effectively infinite means (`-SENTINEL` and `+SENTINEL`). Algorithms that
//! pad a problem with boundary arms pull these like any other arm, and those
//! pulls count against the budget.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::problem::{ArmDistribution, BanditInstance};
use crate::rng::{self, StreamRng};

/// Magnitude of the virtual boundary arms.
pub const SENTINEL: f64 = 1e9;

/// Anything an algorithm can pull: a real arm (1-based) or a boundary arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArmRef {
    Arm(usize),
    /// Deterministic arm with mean `-SENTINEL`.
    Low,
    /// Deterministic arm with mean `+SENTINEL`.
    High,
}

/// Called with the number of pulls made so far, before every pull; returning
/// `true` interrupts the episode with [`Error::Stopped`].
pub type StopSignal = Box<dyn FnMut(u64) -> bool + Send>;

pub struct Environment {
    instance: BanditInstance,
    rng: StreamRng,
    budget_cap: Option<u64>,
    pulls_used: u64,
    /// Slot 0 counts `Low` pulls, slot `K + 1` counts `High` pulls.
    counts: Vec<u64>,
    stop: Option<StopSignal>,
}

impl fmt::Debug for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Environment")
            .field("k", &self.instance.k())
            .field("budget_cap", &self.budget_cap)
            .field("pulls_used", &self.pulls_used)
            .finish_non_exhaustive()
    }
}

impl Environment {
    /// Reward draws come from the `rewards` stream of `seed`.
    pub fn new(instance: BanditInstance, seed: u64) -> Self {
        Self::with_rng(instance, rng::stream(seed, rng::TAG_REWARDS, 0))
    }

    pub fn with_rng(instance: BanditInstance, rng: StreamRng) -> Self {
        let k = instance.k();
        Environment { instance, rng, budget_cap: None, pulls_used: 0, counts: vec![0; k + 2], stop: None }
    }

    pub fn with_budget_cap(mut self, cap: u64) -> Self {
        self.budget_cap = Some(cap);
        self
    }

    pub fn with_stop_signal(mut self, stop: StopSignal) -> Self {
        self.stop = Some(stop);
        self
    }

    pub fn instance(&self) -> &BanditInstance {
        &self.instance
    }

    pub fn k(&self) -> usize {
        self.instance.k()
    }

    pub fn has_stop_signal(&self) -> bool {
        self.stop.is_some()
    }

    pub fn budget_cap(&self) -> Option<u64> {
        self.budget_cap
    }

    pub fn pulls_used(&self) -> u64 {
        self.pulls_used
    }

    /// Pulls left under the cap (`u64::MAX` when uncapped).
    pub fn remaining(&self) -> u64 {
        self.budget_cap.map_or(u64::MAX, |c| c - self.pulls_used)
    }

    /// Pull counts of the real arms `1..=K`.
    pub fn per_arm_counts(&self) -> &[u64] {
        &self.counts[1..=self.k()]
    }

    /// Pull counts of the (`Low`, `High`) boundary arms.
    pub fn sentinel_counts(&self) -> (u64, u64) {
        (self.counts[0], self.counts[self.k() + 1])
    }

    fn slot(&self, arm: ArmRef) -> Result<usize> {
        match arm {
            ArmRef::Arm(k) if (1..=self.k()).contains(&k) => Ok(k),
            ArmRef::Arm(k) => Err(Error::InvalidArm { index: k, k: self.k() }),
            ArmRef::Low => Ok(0),
            ArmRef::High => Ok(self.k() + 1),
        }
    }

    fn reserve(&mut self, n: u64) -> Result<()> {
        let remaining = self.remaining();
        if n > remaining {
            return Err(Error::BudgetExhausted { requested: n, remaining });
        }
        Ok(())
    }

    fn draw(&mut self, slot: usize) -> Result<f64> {
        if let Some(stop) = self.stop.as_mut() {
            if stop(self.pulls_used) {
                return Err(Error::Stopped { pulls: self.pulls_used });
            }
        }
        let k = self.k();
        let y = if slot == 0 {
            -SENTINEL
        } else if slot == k + 1 {
            SENTINEL
        } else {
            match self.instance.arms()[slot - 1] {
                ArmDistribution::Bernoulli { p } => {
                    if self.rng.random::<f64>() < p {
                        1.0
                    } else {
                        0.0
                    }
                }
                ArmDistribution::Gaussian { mean, sigma } => {
                    let z: f64 = self.rng.sample(StandardNormal);
                    mean + sigma * z
                }
                ArmDistribution::Deterministic { value } => value,
            }
        };
        self.pulls_used += 1;
        self.counts[slot] += 1;
        Ok(y)
    }

    /// One reward from arm `k` (1-based).
    pub fn sample_arm(&mut self, k: usize) -> Result<f64> {
        self.pull(ArmRef::Arm(k))
    }

    pub fn pull(&mut self, arm: ArmRef) -> Result<f64> {
        let slot = self.slot(arm)?;
        self.reserve(1)?;
        self.draw(slot)
    }

    /// Empirical mean of `n >= 1` fresh pulls. The whole batch is checked
    /// against the cap before anything is drawn.
    pub fn sample_mean(&mut self, arm: ArmRef, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::param("cannot average zero samples"));
        }
        let slot = self.slot(arm)?;
        self.reserve(n)?;
        let mut sum = 0.0;
        for _ in 0..n {
            sum += self.draw(slot)?;
        }
        Ok(sum / n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Shape;

    #[test]
    fn degenerate_draws() {
        let i = BanditInstance::deterministic(&[0.3], 0.0, Shape::None).unwrap();
        assert_eq!(Environment::new(i, 99).sample_arm(1).unwrap(), 0.3);
        let i = BanditInstance::bernoulli(&[1.0, 0.0], 0.5, Shape::None).unwrap();
        let mut env = Environment::new(i, 5);
        assert_eq!(env.sample_arm(1).unwrap(), 1.0);
        assert_eq!(env.sample_arm(2).unwrap(), 0.0);
    }

    #[test]
    fn same_seed_same_draws() {
        let i = BanditInstance::gaussian(&[0.0], 1.0, 0.0, Shape::None).unwrap();
        let a = Environment::new(i.clone(), 11).sample_arm(1).unwrap();
        let b = Environment::new(i, 11).sample_arm(1).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn accounting_and_cap() {
        let i = BanditInstance::bernoulli(&[0.5, 0.5, 0.5], 0.5, Shape::None).unwrap();
        let mut env = Environment::new(i, 1).with_budget_cap(10);
        env.sample_mean(ArmRef::Arm(2), 4).unwrap();
        env.pull(ArmRef::Low).unwrap();
        env.pull(ArmRef::High).unwrap();
        assert_eq!(env.pulls_used(), 6);
        assert_eq!(env.per_arm_counts(), &[0, 4, 0]);
        assert_eq!(env.sentinel_counts(), (1, 1));
        assert!(matches!(
            env.sample_mean(ArmRef::Arm(1), 5),
            Err(Error::BudgetExhausted { requested: 5, remaining: 4 })
        ));
        // a rejected batch consumes nothing
        assert_eq!(env.pulls_used(), 6);
        assert!(matches!(env.sample_arm(4), Err(Error::InvalidArm { index: 4, k: 3 })));
        assert!(matches!(env.sample_arm(0), Err(Error::InvalidArm { .. })));
        assert_eq!(env.pull(ArmRef::Low).unwrap(), -SENTINEL);
    }

    #[test]
    fn stop_signal_interrupts() {
        let i = BanditInstance::bernoulli(&[0.5], 0.5, Shape::None).unwrap();
        let mut env = Environment::new(i, 1).with_stop_signal(Box::new(|used| used >= 3));
        assert!(matches!(env.sample_mean(ArmRef::Arm(1), 5), Err(Error::Stopped { pulls: 3 })));
        assert_eq!(env.pulls_used(), 3);
    }
}

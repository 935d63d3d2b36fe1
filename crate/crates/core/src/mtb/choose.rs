use rand::Rng;
use serde::{Deserialize, Serialize};

use super::explore::ExploreHistory;

/// How the data-driven tolerance is computed when no leaf brackets the
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonRule {
    /// `max(2 eps0, min |mu_hat - tau|)`: the smallest tolerance that makes
    /// the candidate list non-empty.
    #[default]
    Threshold,
    /// `max(2 eps0, min |mu_hat - mu|)` against the true means. Not
    /// computable by a real learner; kept for audits.
    TrueMeans,
}

/// Positions that qualify at one step under tolerance `eps`, deduplicated.
pub fn qualifying(step: &super::explore::ExploreStep, eps: f64, tau: f64) -> Vec<usize> {
    let mut out: Vec<usize> = step
        .roles()
        .iter()
        .filter(|(_, mu)| (mu - tau).abs() <= eps)
        .map(|&(pos, _)| pos)
        .collect();
    if step.node.is_leaf() && step.mu_l + eps < tau && tau <= step.mu_r - eps {
        out.push(step.node.r);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The candidate list built by scanning `history` in time order; at most one
/// position per step, drawn uniformly with `rng` when several qualify.
pub fn candidate_list<R: Rng + ?Sized>(
    eps: f64,
    history: &ExploreHistory,
    tau: f64,
    rng: &mut R,
) -> Vec<usize> {
    let mut list = Vec::with_capacity(history.steps.len());
    for step in &history.steps {
        let q = qualifying(step, eps, tau);
        match q.len() {
            0 => {}
            1 => list.push(q[0]),
            n => list.push(q[rng.random_range(0..n)]),
        }
    }
    list
}

/// Lower median (the `ceil(n/2)`-th smallest) of the candidate list, or
/// `None` when no step qualified.
pub fn choose<R: Rng + ?Sized>(eps: f64, history: &ExploreHistory, tau: f64, rng: &mut R) -> Option<usize> {
    let mut list = candidate_list(eps, history, tau, rng);
    if list.is_empty() {
        return None;
    }
    list.sort_unstable();
    Some(list[(list.len() - 1) / 2])
}

/// Data-driven tolerance for [`choose`] under [`EpsilonRule::Threshold`].
pub fn epsilon_hat(history: &ExploreHistory, tau: f64) -> f64 {
    epsilon_hat_with(history, tau, EpsilonRule::Threshold, |_| None)
}

/// `2 eps0` when some leaf brackets `tau`; otherwise the rule's distance
/// floored at `2 eps0`. `true_mean(pos)` is only consulted by
/// [`EpsilonRule::TrueMeans`] and returns `None` for boundary positions.
pub fn epsilon_hat_with(
    history: &ExploreHistory,
    tau: f64,
    rule: EpsilonRule,
    true_mean: impl Fn(usize) -> Option<f64>,
) -> f64 {
    let floor = 2.0 * history.eps0;
    if history.steps.iter().any(|s| s.leaf_straddles(tau)) {
        return floor;
    }
    let dist = history
        .steps
        .iter()
        .flat_map(|s| s.roles())
        .filter_map(|(pos, mu_hat)| match rule {
            EpsilonRule::Threshold => Some((mu_hat - tau).abs()),
            EpsilonRule::TrueMeans => true_mean(pos).map(|mu| (mu_hat - mu).abs()),
        })
        .fold(f64::INFINITY, f64::min);
    if dist.is_finite() {
        floor.max(dist)
    } else {
        floor
    }
}

use crate::env::{ArmRef, Environment};
use crate::error::{Error, Result};
use crate::tree::{root_node, TreeNode};

/// An ordered list of pullable arms addressed by position `1..=len`.
///
/// The search routines only see positions; the line decides which arm (or
/// boundary arm) each position stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArmLine {
    arms: Vec<ArmRef>,
    padded: bool,
}

impl ArmLine {
    /// The arms as given, without boundary arms.
    pub fn plain(arms: impl IntoIterator<Item = ArmRef>) -> Self {
        ArmLine { arms: arms.into_iter().collect(), padded: false }
    }

    /// `Low`, then the arms, then `High`: the threshold is then always
    /// bracketed by the first and last positions.
    pub fn padded(arms: impl IntoIterator<Item = ArmRef>) -> Self {
        let mut v = vec![ArmRef::Low];
        v.extend(arms);
        v.push(ArmRef::High);
        ArmLine { arms: v, padded: true }
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn is_padded(&self) -> bool {
        self.padded
    }

    /// Arm at position `pos` (1-based).
    pub fn arm(&self, pos: usize) -> ArmRef {
        self.arms[pos - 1]
    }

    /// Number of real (unpadded) positions.
    pub fn inner_len(&self) -> usize {
        if self.padded {
            self.arms.len() - 2
        } else {
            self.arms.len()
        }
    }

    /// Position converted to a 0-based-with-boundary label: with padding,
    /// position 1 is label 0 (the `Low` arm) and the inner arms are
    /// `1..=inner_len`; without padding labels equal positions.
    pub fn label(&self, pos: usize) -> usize {
        if self.padded {
            pos - 1
        } else {
            pos
        }
    }
}

/// One iteration of the walk: the node visited and the fresh empirical
/// means of its three positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExploreStep {
    pub node: TreeNode,
    pub mu_l: f64,
    pub mu_m: f64,
    pub mu_r: f64,
}

impl ExploreStep {
    /// `(position, empirical mean)` for the l, m and r roles.
    pub fn roles(&self) -> [(usize, f64); 3] {
        [(self.node.l, self.mu_l), (self.node.m, self.mu_m), (self.node.r, self.mu_r)]
    }

    /// The node is a leaf whose two means bracket `tau`.
    pub fn leaf_straddles(&self, tau: f64) -> bool {
        self.node.is_leaf() && self.mu_l <= tau && tau <= self.mu_r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExploreHistory {
    pub steps: Vec<ExploreStep>,
    pub t1: usize,
    pub t2: u64,
    pub eps0: f64,
}

impl ExploreHistory {
    pub fn total_pulls(&self) -> u64 {
        3 * self.t1 as u64 * self.t2
    }
}

/// `sqrt(2 sigma^2 log(48) / t2)`.
pub fn eps0(sigma: f64, t2: u64) -> f64 {
    (2.0 * sigma * sigma * 48f64.ln() / t2 as f64).sqrt()
}

/// Binary search with corrections over the positions of `line`.
///
/// Each of the `t1` steps pulls the current node's three positions `t2`
/// times each and moves, in this order of priority: to the parent when the
/// outer means do not bracket `tau`; nowhere at a leaf; to the right child
/// when `mu_m <= tau <= mu_r`; otherwise to the left child. The parent of
/// the root is the root.
pub fn explore(
    env: &mut Environment,
    line: &ArmLine,
    tau: f64,
    t1: usize,
    t2: u64,
    sigma: f64,
) -> Result<ExploreHistory> {
    if t1 == 0 || t2 == 0 {
        return Err(Error::param(format!("explore needs t1, t2 >= 1 (got {t1}, {t2})")));
    }
    let needed = 3 * t1 as u64 * t2;
    if needed > env.remaining() {
        return Err(Error::BudgetExhausted { requested: needed, remaining: env.remaining() });
    }
    let root = root_node(line.len())?;
    let mut path: Vec<TreeNode> = Vec::new();
    let mut v = root;
    let mut steps = Vec::with_capacity(t1);
    for _ in 0..t1 {
        let mu_l = env.sample_mean(line.arm(v.l), t2)?;
        let mu_m = env.sample_mean(line.arm(v.m), t2)?;
        let mu_r = env.sample_mean(line.arm(v.r), t2)?;
        steps.push(ExploreStep { node: v, mu_l, mu_m, mu_r });

        if !(mu_l <= tau && tau <= mu_r) {
            v = path.pop().unwrap_or(root);
        } else if v.is_leaf() {
        } else if mu_m <= tau && tau <= mu_r {
            path.push(v);
            v = v.right().expect("internal node");
        } else {
            path.push(v);
            v = v.left().expect("internal node");
        }
    }
    Ok(ExploreHistory { steps, t1, t2, eps0: eps0(sigma, t2) })
}

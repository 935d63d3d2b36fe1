//! Implicit binary search tree over arm indices `1..=K`.
//!
//! A node is a triple `{L, M, R}` with `M = (L + R) / 2`; its children split
//! `[L, R]` into `[L, M]` and `[M, R]`, and leaves are the nodes with
//! `R = L + 1`. Nodes are computed on demand and parents are not stored;
//! callers that need to climb keep their own path stack.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeNode {
    pub l: usize,
    pub m: usize,
    pub r: usize,
}

impl TreeNode {
    pub fn new(l: usize, m: usize, r: usize) -> Self {
        debug_assert!(l <= m && m <= r);
        TreeNode { l, m, r }
    }

    pub fn is_leaf(&self) -> bool {
        self.r == self.l + 1
    }

    /// `(left, right)`, both `None` at a leaf.
    pub fn children(&self) -> (Option<TreeNode>, Option<TreeNode>) {
        if self.is_leaf() {
            return (None, None);
        }
        let TreeNode { l, m, r } = *self;
        (Some(TreeNode::new(l, (l + m) / 2, m)), Some(TreeNode::new(m, (m + r) / 2, r)))
    }

    pub fn left(&self) -> Option<TreeNode> {
        self.children().0
    }

    pub fn right(&self) -> Option<TreeNode> {
        self.children().1
    }
}

/// `{1, (1 + K) / 2, K}`.
pub fn root_node(k: usize) -> Result<TreeNode> {
    if k < 2 {
        return Err(Error::DegenerateProblem(format!("the search tree needs K >= 2, got {k}")));
    }
    Ok(TreeNode::new(1, (1 + k) / 2, k))
}

pub fn children(v: &TreeNode) -> (Option<TreeNode>, Option<TreeNode>) {
    v.children()
}

pub fn is_leaf(v: &TreeNode) -> bool {
    v.is_leaf()
}

/// `floor(log2 K) + 1`, the bound on the number of edges on any
/// root-to-node path (the root has depth 0).
pub fn max_depth(k: usize) -> usize {
    (usize::BITS - 1 - k.leading_zeros()) as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(l: usize, m: usize, r: usize) -> TreeNode {
        TreeNode::new(l, m, r)
    }

    #[test]
    fn roots() {
        assert_eq!(root_node(7).unwrap(), n(1, 4, 7));
        assert_eq!(root_node(3).unwrap(), n(1, 2, 3));
        assert_eq!(root_node(2).unwrap(), n(1, 1, 2));
        assert!(root_node(2).unwrap().is_leaf());
        assert!(matches!(root_node(1), Err(Error::DegenerateProblem(_))));
    }

    #[test]
    fn child_examples() {
        assert_eq!(n(1, 4, 7).children(), (Some(n(1, 2, 4)), Some(n(4, 5, 7))));
        assert_eq!(n(1, 1, 2).children(), (None, None));
        assert_eq!(n(4, 5, 7).children(), (Some(n(4, 4, 5)), Some(n(5, 6, 7))));
    }

    #[test]
    fn leaf_examples() {
        assert!(is_leaf(&n(3, 3, 4)));
        assert!(!is_leaf(&n(1, 4, 7)));
        assert!(is_leaf(&n(4, 4, 5)));
    }

    fn walk(v: TreeNode, depth: usize, max: &mut usize, leaves: &mut Vec<(usize, usize)>) {
        *max = (*max).max(depth);
        let (a, b) = v.children();
        match (a, b) {
            (Some(a), Some(b)) => {
                assert_eq!((a.l, a.r, b.l, b.r), (v.l, v.m, v.m, v.r));
                assert_eq!(a.m, (a.l + a.r) / 2);
                assert_eq!(b.m, (b.l + b.r) / 2);
                walk(a, depth + 1, max, leaves);
                walk(b, depth + 1, max, leaves);
            }
            _ => leaves.push((v.l, v.r)),
        }
    }

    #[test]
    fn depth_bound_exhaustive() {
        for k in 2..=1024 {
            let mut max = 0;
            let mut leaves = Vec::new();
            walk(root_node(k).unwrap(), 0, &mut max, &mut leaves);
            assert!(max <= max_depth(k), "K = {k}: depth {max} > {}", max_depth(k));
        }
    }

    #[test]
    fn every_adjacent_pair_is_exactly_one_leaf() {
        for k in 2..=256 {
            let mut max = 0;
            let mut leaves = Vec::new();
            walk(root_node(k).unwrap(), 1, &mut max, &mut leaves);
            leaves.sort_unstable();
            let expected: Vec<_> = (1..k).map(|j| (j, j + 1)).collect();
            assert_eq!(leaves, expected, "K = {k}");
        }
    }
}

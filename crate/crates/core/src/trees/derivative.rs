//! Derivatives `D(S)`, iterated derivatives, heights and ranks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};

use super::{FrontierMode, LevelTree, TreeError, TreeNode};
use crate::ordinal::Ordinal;

/// `D(S)` via the levelwise image formula: level `n < d` of `D(S)` is the
/// projection of level `n + 1` of `S`.
pub fn derivative(s: &LevelTree, mode: FrontierMode) -> LevelTree {
    let ls = s.structure();
    let d = ls.depth();
    let mut levels = Vec::with_capacity(d);
    for n in 1..d {
        let f = ls.fanout(n);
        levels.push(s.level(n + 1).iter().map(|&x| x / f).collect());
    }
    levels.push(match mode {
        FrontierMode::ClosedWorld => BTreeSet::new(),
        FrontierMode::OpenFrontier => s.level(d).clone(),
    });
    LevelTree::from_parts_unchecked(ls.clone(), levels)
}

/// `D(S)` straight from the definition: keep `sigma` when some strictly
/// longer `tau ∈ S` extends it. Scans every longer node; quadratic.
pub fn derivative_definitional(s: &LevelTree, mode: FrontierMode) -> LevelTree {
    let ls = s.structure();
    let d = ls.depth();
    let mut levels = vec![BTreeSet::new(); d];
    for n in 1..=d {
        for &sigma in s.level(n) {
            let keep = (n == d && mode == FrontierMode::OpenFrontier)
                || (n + 1..=d).any(|m| {
                    s.level(m)
                        .iter()
                        .any(|&tau| ls.restrict(tau, m, n) == sigma)
                });
            if keep {
                levels[n - 1].insert(sigma);
            }
        }
    }
    LevelTree::from_parts_unchecked(ls.clone(), levels)
}

/// `S, D(S), D^2(S), ...` up to and including the first fixpoint.
pub fn iterate_derivative(s: &LevelTree, mode: FrontierMode) -> Vec<LevelTree> {
    let mut seq = vec![s.clone()];
    loop {
        let next = derivative(seq.last().unwrap(), mode);
        if &next == seq.last().unwrap() {
            return seq;
        }
        seq.push(next);
    }
}

/// Least `k` with `D^{k+1}(S) = D^k(S)`. Always finite at finite depth.
pub fn height(s: &LevelTree, mode: FrontierMode) -> Ordinal {
    Ordinal::finite(iterate_derivative(s, mode).len() as u64 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RankValue {
    Fin(Ordinal),
    /// The node survives in the stabilized derivative.
    Core,
}

impl RankValue {
    pub fn finite(&self) -> Option<u64> {
        match self {
            RankValue::Fin(o) => o.as_finite(),
            RankValue::Core => None,
        }
    }
}

impl Serialize for RankValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RankValue::Fin(o) => s.collect_str(o),
            RankValue::Core => s.serialize_str("core"),
        }
    }
}

/// Ranks of all nodes, per level, keyed by node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    pub height: Ordinal,
    ranks: Vec<BTreeMap<u64, RankValue>>,
}

impl RankTable {
    /// `(node index, rank)` pairs at level `n`, canonical order.
    pub fn level(&self, n: usize) -> &BTreeMap<u64, RankValue> {
        &self.ranks[n - 1]
    }

    pub fn depth(&self) -> usize {
        self.ranks.len()
    }

    /// Largest finite rank at level `n`.
    pub fn max_finite(&self, n: usize) -> Option<u64> {
        self.ranks[n - 1]
            .values()
            .filter_map(RankValue::finite)
            .max()
    }

    pub fn core_count(&self, n: usize) -> usize {
        self.ranks[n - 1]
            .values()
            .filter(|r| **r == RankValue::Core)
            .count()
    }
}

pub fn rank_table(s: &LevelTree, mode: FrontierMode) -> RankTable {
    let seq = iterate_derivative(s, mode);
    let d = s.depth();
    let mut ranks = vec![BTreeMap::new(); d];
    for (k, pair) in seq.windows(2).enumerate() {
        for n in 1..=d {
            for idx in pair[0].level(n).difference(pair[1].level(n)) {
                ranks[n - 1].insert(*idx, RankValue::Fin(Ordinal::finite(k as u64)));
            }
        }
    }
    let fixpoint = seq.last().unwrap();
    for n in 1..=d {
        for &idx in fixpoint.level(n) {
            ranks[n - 1].insert(idx, RankValue::Core);
        }
    }
    RankTable {
        height: Ordinal::finite(seq.len() as u64 - 1),
        ranks,
    }
}

pub fn rank_of(s: &LevelTree, node: &TreeNode, mode: FrontierMode) -> Result<RankValue, TreeError> {
    let (n, idx) = s.structure().encode(node)?;
    if !s.level(n).contains(&idx) {
        return Err(TreeError::NodeNotInTree);
    }
    Ok(rank_table(s, mode).level(n)[&idx].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{full_tree, Caps, LevelStructure};

    fn two_level() -> LevelTree {
        let ls = LevelStructure::cyclic(&[2, 2], Caps::default()).unwrap();
        LevelTree::from_indices(
            ls,
            vec![BTreeSet::from([0, 1]), BTreeSet::from([0])],
            Caps::default(),
        )
        .unwrap()
    }

    #[test]
    fn full_tree_derivative() {
        let ls = LevelStructure::cyclic(&[2, 2], Caps::default()).unwrap();
        let t = full_tree(&ls, Caps::default()).unwrap();
        let dt = derivative(&t, FrontierMode::ClosedWorld);
        assert_eq!(dt.level(1), t.level(1));
        assert!(dt.level(2).is_empty());
        assert_eq!(height(&t, FrontierMode::OpenFrontier), Ordinal::zero());
        let ranks = rank_table(&t, FrontierMode::OpenFrontier);
        assert_eq!(ranks.core_count(1) + ranks.core_count(2), t.node_count());
    }

    #[test]
    fn definition_example() {
        let s = two_level();
        let ds = derivative(&s, FrontierMode::ClosedWorld);
        assert_eq!(ds.level(1), &BTreeSet::from([0]));
        assert!(ds.level(2).is_empty());
        assert_eq!(ds, derivative_definitional(&s, FrontierMode::ClosedWorld));

        let ls = s.structure().clone();
        let rank = |c: Vec<Vec<u64>>| rank_of(&s, &ls.node(c).unwrap(), FrontierMode::ClosedWorld);
        assert_eq!(
            rank(vec![vec![1]]).unwrap(),
            RankValue::Fin(Ordinal::finite(0))
        );
        assert_eq!(
            rank(vec![vec![0], vec![0]]).unwrap(),
            RankValue::Fin(Ordinal::finite(0))
        );
        assert_eq!(
            rank(vec![vec![0]]).unwrap(),
            RankValue::Fin(Ordinal::finite(1))
        );
        assert_eq!(height(&s, FrontierMode::ClosedWorld), Ordinal::finite(2));
        assert_eq!(rank(vec![vec![1], vec![1]]), Err(TreeError::NodeNotInTree));
    }

    #[test]
    fn open_frontier_keeps_bottom_level() {
        let s = two_level();
        let ds = derivative(&s, FrontierMode::OpenFrontier);
        assert_eq!(ds.level(2), s.level(2));
        assert_eq!(ds, derivative_definitional(&s, FrontierMode::OpenFrontier));
    }

    #[test]
    fn empty_tree_has_height_zero() {
        let ls = LevelStructure::cyclic(&[3, 3], Caps::default()).unwrap();
        let e = LevelTree::empty(ls);
        assert_eq!(height(&e, FrontierMode::ClosedWorld), Ordinal::zero());
        assert_eq!(height(&e, FrontierMode::OpenFrontier), Ordinal::zero());
    }
}

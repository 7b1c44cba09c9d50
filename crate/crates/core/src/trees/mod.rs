//! Finite-depth trees over products of explicit finite abelian levels.
//!
//! Level `n` (for `1 <= n <= d`) of a tree is a subset of
//! `H^n = H_0 x ... x H_{n-1}`. Nodes are stored as mixed-radix indices into
//! `H^n`, so the parent of a level-`n+1` node is `index / |H_n|` and the
//! canonical node order (lexicographic on residue tuples) is numeric order.

mod derivative;
mod io;
mod ops;

pub use derivative::{
    derivative, derivative_definitional, height, iterate_derivative, rank_of, rank_table,
    RankTable, RankValue,
};
pub use io::{node_to_json, read_tree_json, tree_to_json, TreeFile};
pub use ops::{
    full_tree, gamma, gamma_with_report, orbit_equivalent, phi, psi, subtree_at, translate,
    GammaReport, OrbitDecision,
};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{AbelianError, FiniteAbelian, GroupElement};

pub const DEFAULT_ORDER_CAP: u64 = 200_000;
pub const DEFAULT_NODE_CAP: usize = 500_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Bound on `|H^d|`.
    pub order: u64,
    /// Bound on the total number of nodes in a tree.
    pub nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order: DEFAULT_ORDER_CAP,
            nodes: DEFAULT_NODE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("{what} {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },
    #[error("a level structure needs at least one level")]
    NoLevels,
    #[error("node {node} at level {level} has no parent at level {}", level - 1)]
    NotPrefixClosed { level: usize, node: String },
    #[error("input is not a coset tree (level {level})")]
    NotCosetTree { level: usize },
    #[error("ambient tree is not a group tree")]
    AmbientNotGroupTree,
    #[error("node is not in the tree")]
    NodeNotInTree,
    #[error("trees do not share a level structure")]
    StructureMismatch,
    #[error("invalid node: {0}")]
    InvalidNode(String),
    #[error("{location}: {msg}")]
    Format { location: String, msg: String },
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// The levels `H_0, ..., H_{d-1}` together with the products `H^1, ..., H^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelStructure {
    levels: Vec<FiniteAbelian>,
    prefixes: Vec<FiniteAbelian>,
}

impl LevelStructure {
    pub fn new(levels: Vec<FiniteAbelian>, caps: Caps) -> Result<Self, TreeError> {
        if levels.is_empty() {
            return Err(TreeError::NoLevels);
        }
        let total: u128 = levels.iter().map(|l| l.order() as u128).product();
        if total > caps.order as u128 {
            return Err(TreeError::CapExceeded {
                what: "order of H^d",
                value: total,
                cap: caps.order as u128,
            });
        }
        let mut prefixes = Vec::with_capacity(levels.len());
        let mut acc = FiniteAbelian::trivial();
        for level in &levels {
            acc = acc.product(level)?;
            prefixes.push(acc.clone());
        }
        Ok(LevelStructure { levels, prefixes })
    }

    /// Shorthand for levels that are single cyclic groups.
    pub fn cyclic(orders: &[u64], caps: Caps) -> Result<Self, TreeError> {
        let levels = orders
            .iter()
            .map(|&n| FiniteAbelian::new(vec![n]))
            .collect::<Result<Vec<_>, _>>()?;
        LevelStructure::new(levels, caps)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// `H_i`, zero-based.
    pub fn level(&self, i: usize) -> &FiniteAbelian {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[FiniteAbelian] {
        &self.levels
    }

    /// `H^n` for `1 <= n <= d`.
    pub fn prefix(&self, n: usize) -> &FiniteAbelian {
        &self.prefixes[n - 1]
    }

    /// `|H_n|`, the branching factor below level `n`.
    pub(crate) fn fanout(&self, n: usize) -> u64 {
        self.levels[n].order()
    }

    /// Index of `idx ∈ H^n` restricted to length `m <= n`.
    pub(crate) fn restrict(&self, idx: u64, n: usize, m: usize) -> u64 {
        (m..n).fold(idx, |acc, i| acc / self.fanout(i))
    }

    pub(crate) fn children(&self, idx: u64, n: usize) -> std::ops::Range<u64> {
        let f = self.fanout(n);
        idx * f..idx * f + f
    }

    pub fn node(&self, coords: Vec<Vec<u64>>) -> Result<TreeNode, TreeError> {
        let n = coords.len();
        if n == 0 || n > self.depth() {
            return Err(TreeError::InvalidNode(format!(
                "length {n} outside 1..={}",
                self.depth()
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            self.levels[i].check_residues(c)?;
        }
        Ok(TreeNode { coords })
    }

    pub(crate) fn encode(&self, node: &TreeNode) -> Result<(usize, u64), TreeError> {
        let n = node.len();
        if n == 0 || n > self.depth() {
            return Err(TreeError::InvalidNode(format!(
                "length {n} outside 1..={}",
                self.depth()
            )));
        }
        let mut idx = 0u64;
        for (i, c) in node.coords.iter().enumerate() {
            self.levels[i].check_residues(c)?;
            idx = idx * self.fanout(i) + self.levels[i].encode(c);
        }
        Ok((n, idx))
    }

    pub(crate) fn decode(&self, n: usize, idx: u64) -> TreeNode {
        let mut coords = vec![Vec::new(); n];
        let mut rest = idx;
        for i in (0..n).rev() {
            let f = self.fanout(i);
            coords[i] = self.levels[i].decode(rest % f);
            rest /= f;
        }
        TreeNode { coords }
    }

    /// The node as a single element of `H^n`.
    pub fn as_element(&self, node: &TreeNode) -> Result<GroupElement, TreeError> {
        let (n, _) = self.encode(node)?;
        let flat: Vec<u64> = node.coords.iter().flatten().copied().collect();
        Ok(self.prefix(n).element(flat)?)
    }
}

/// `sigma ∈ H^n`: one residue tuple per level `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeNode {
    coords: Vec<Vec<u64>>,
}

impl TreeNode {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Vec<u64>] {
        &self.coords
    }

    /// `sigma|m`.
    pub fn restrict(&self, m: usize) -> TreeNode {
        TreeNode {
            coords: self.coords[..m.min(self.coords.len())].to_vec(),
        }
    }

    /// `self ⊆ other`: `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &TreeNode) -> bool {
        self.len() <= other.len() && other.coords[..self.len()] == self.coords[..]
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| match c.as_slice() {
                [r] => r.to_string(),
                rs => format!(
                    "[{}]",
                    rs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                ),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Truncation semantics at the bottom level `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontierMode {
    /// Nothing exists below depth `d`.
    #[default]
    ClosedWorld,
    /// Depth-`d` nodes are presumed to extend.
    OpenFrontier,
}

impl std::str::FromStr for FrontierMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closed" | "closed_world" => Ok(FrontierMode::ClosedWorld),
            "open" | "open_frontier" => Ok(FrontierMode::OpenFrontier),
            other => Err(format!("unknown frontier mode '{other}' (closed|open)")),
        }
    }
}

/// A prefix-closed set of nodes of length `1..=d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelTree {
    structure: LevelStructure,
    levels: Vec<BTreeSet<u64>>,
}

impl LevelTree {
    /// Builds a tree from per-level index sets (`levels[n-1] ⊆ H^n`),
    /// checking bounds, prefix closure and the node cap.
    pub fn from_indices(
        structure: LevelStructure,
        levels: Vec<BTreeSet<u64>>,
        caps: Caps,
    ) -> Result<Self, TreeError> {
        if levels.len() != structure.depth() {
            return Err(TreeError::StructureMismatch);
        }
        let total: usize = levels.iter().map(BTreeSet::len).sum();
        if total > caps.nodes {
            return Err(TreeError::CapExceeded {
                what: "node count",
                value: total as u128,
                cap: caps.nodes as u128,
            });
        }
        for (i, level) in levels.iter().enumerate() {
            let n = i + 1;
            if let Some(&max) = level.last() {
                if max >= structure.prefix(n).order() {
                    return Err(TreeError::InvalidNode(format!("index {max} outside H^{n}")));
                }
            }
            if n > 1 {
                let f = structure.fanout(i);
                if let Some(&orphan) = level.iter().find(|&&x| !levels[i - 1].contains(&(x / f))) {
                    return Err(TreeError::NotPrefixClosed {
                        level: n,
                        node: structure.decode(n, orphan).to_string(),
                    });
                }
            }
        }
        Ok(LevelTree { structure, levels })
    }

    /// Builds a tree from explicit nodes; the set must already be prefix-closed.
    pub fn from_nodes(
        structure: LevelStructure,
        nodes: impl IntoIterator<Item = TreeNode>,
        caps: Caps,
    ) -> Result<Self, TreeError> {
        let mut levels = vec![BTreeSet::new(); structure.depth()];
        for node in nodes {
            let (n, idx) = structure.encode(&node)?;
            levels[n - 1].insert(idx);
        }
        LevelTree::from_indices(structure, levels, caps)
    }

    pub(crate) fn from_parts_unchecked(
        structure: LevelStructure,
        levels: Vec<BTreeSet<u64>>,
    ) -> Self {
        debug_assert_eq!(levels.len(), structure.depth());
        LevelTree { structure, levels }
    }

    pub fn empty(structure: LevelStructure) -> Self {
        let d = structure.depth();
        LevelTree {
            structure,
            levels: vec![BTreeSet::new(); d],
        }
    }

    pub fn structure(&self) -> &LevelStructure {
        &self.structure
    }

    pub fn depth(&self) -> usize {
        self.structure.depth()
    }

    /// `S ∩ H^n` as indices, `1 <= n <= d`.
    pub fn level(&self, n: usize) -> &BTreeSet<u64> {
        &self.levels[n - 1]
    }

    pub(crate) fn levels(&self) -> &[BTreeSet<u64>] {
        &self.levels
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(BTreeSet::is_empty)
    }

    pub fn contains(&self, node: &TreeNode) -> bool {
        self.structure
            .encode(node)
            .is_ok_and(|(n, idx)| self.levels[n - 1].contains(&idx))
    }

    /// Nodes of length `n` in canonical order.
    pub fn nodes_at(&self, n: usize) -> impl Iterator<Item = TreeNode> + '_ {
        self.levels[n - 1]
            .iter()
            .map(move |&idx| self.structure.decode(n, idx))
    }

    /// All nodes, shortest first, canonical order within a level.
    pub fn nodes(&self) -> impl Iterator<Item = TreeNode> + '_ {
        (1..=self.depth()).flat_map(move |n| self.nodes_at(n))
    }

    pub fn is_subtree_of(&self, other: &LevelTree) -> bool {
        self.structure == other.structure
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.is_subset(b))
    }

    /// Every level nonempty and a subgroup of `H^n`.
    pub fn is_group_tree(&self) -> bool {
        self.levels
            .iter()
            .enumerate()
            .all(|(i, level)| self.structure.prefix(i + 1).is_subgroup_idx(level))
    }

    /// Every nonempty level is a coset of a subgroup of `H^n`.
    pub fn is_coset_tree(&self) -> bool {
        self.first_non_coset_level().is_none()
    }

    pub(crate) fn first_non_coset_level(&self) -> Option<usize> {
        self.levels.iter().enumerate().find_map(|(i, level)| {
            (!level.is_empty() && !self.structure.prefix(i + 1).is_coset_idx(level))
                .then_some(i + 1)
        })
    }

    /// Prefix closure holds; used to validate outputs.
    pub fn is_prefix_closed(&self) -> bool {
        (1..self.levels.len()).all(|i| {
            let f = self.structure.fanout(i);
            self.levels[i]
                .iter()
                .all(|&x| self.levels[i - 1].contains(&(x / f)))
        })
    }
}

//! Tree constructions: full trees, `Gamma(S)`, translation, subtrees at a
//! node, translator trees `Phi(S, S')`, their intersections `Psi`, and the
//! depth-`d` orbit test.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{Caps, LevelStructure, LevelTree, TreeError, TreeNode};

/// `T_H` truncated at depth `d`: every tuple at every level.
pub fn full_tree(ls: &LevelStructure, caps: Caps) -> Result<LevelTree, TreeError> {
    let total: u128 = (1..=ls.depth()).map(|n| ls.prefix(n).order() as u128).sum();
    if total > caps.nodes as u128 {
        return Err(TreeError::CapExceeded {
            what: "node count",
            value: total,
            cap: caps.nodes as u128,
        });
    }
    let levels = (1..=ls.depth())
        .map(|n| (0..ls.prefix(n).order()).collect())
        .collect();
    Ok(LevelTree::from_parts_unchecked(ls.clone(), levels))
}

/// Levels of `Gamma(S)` that were empty in `S` and became `{0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub zero_filled_levels: Vec<usize>,
}

/// The canonical group tree of a coset tree: each nonempty level is shifted
/// by minus its least node, each empty level becomes `{0}`.
pub fn gamma(s: &LevelTree) -> Result<LevelTree, TreeError> {
    gamma_with_report(s).map(|(t, _)| t)
}

pub fn gamma_with_report(s: &LevelTree) -> Result<(LevelTree, GammaReport), TreeError> {
    if let Some(level) = s.first_non_coset_level() {
        return Err(TreeError::NotCosetTree { level });
    }
    let ls = s.structure();
    let mut zero_filled_levels = Vec::new();
    let levels = (1..=ls.depth())
        .map(|n| {
            let shape = ls.prefix(n);
            match s.level(n).first() {
                Some(&least) => shape.translate_idx(s.level(n), shape.neg_idx(least)),
                None => {
                    zero_filled_levels.push(n);
                    BTreeSet::from([0])
                }
            }
        })
        .collect();
    Ok((
        LevelTree::from_parts_unchecked(ls.clone(), levels),
        GammaReport { zero_filled_levels },
    ))
}

/// `x + S`, adding `x|n` to every length-`n` node. `x` must have length `d`.
pub fn translate(s: &LevelTree, x: &TreeNode) -> Result<LevelTree, TreeError> {
    let ls = s.structure();
    let (len, x_idx) = ls.encode(x)?;
    if len != ls.depth() {
        return Err(TreeError::InvalidNode(format!(
            "translator has length {len}, expected {}",
            ls.depth()
        )));
    }
    Ok(translate_idx(s, x_idx))
}

pub(crate) fn translate_idx(s: &LevelTree, x_idx: u64) -> LevelTree {
    let ls = s.structure();
    let d = ls.depth();
    let levels = (1..=d)
        .map(|n| {
            ls.prefix(n)
                .translate_idx(s.level(n), ls.restrict(x_idx, d, n))
        })
        .collect();
    LevelTree::from_parts_unchecked(ls.clone(), levels)
}

/// `S_sigma`: the nodes of `S` comparable with `sigma`.
pub fn subtree_at(s: &LevelTree, sigma: &TreeNode) -> Result<LevelTree, TreeError> {
    let ls = s.structure();
    let (len, idx) = ls.encode(sigma)?;
    if !s.level(len).contains(&idx) {
        return Err(TreeError::NodeNotInTree);
    }
    let levels = (1..=ls.depth())
        .map(|n| {
            if n <= len {
                BTreeSet::from([ls.restrict(idx, len, n)])
            } else {
                s.level(n)
                    .iter()
                    .copied()
                    .filter(|&tau| ls.restrict(tau, n, len) == idx)
                    .collect()
            }
        })
        .collect();
    Ok(LevelTree::from_parts_unchecked(ls.clone(), levels))
}

fn check_shared(s: &LevelTree, s2: &LevelTree, ambient: &LevelTree) -> Result<(), TreeError> {
    if s.structure() != s2.structure() || s.structure() != ambient.structure() {
        return Err(TreeError::StructureMismatch);
    }
    if !ambient.is_group_tree() {
        return Err(TreeError::AmbientNotGroupTree);
    }
    Ok(())
}

/// `Phi(S, S')`: nodes `sigma` of the ambient tree with
/// `(sigma|m) + (S ∩ H^m) = S' ∩ H^m` for every `0 < m <= lh(sigma)`.
pub fn phi(s: &LevelTree, s2: &LevelTree, ambient: &LevelTree) -> Result<LevelTree, TreeError> {
    check_shared(s, s2, ambient)?;
    Ok(phi_unchecked(s, s2, ambient))
}

fn phi_unchecked(s: &LevelTree, s2: &LevelTree, ambient: &LevelTree) -> LevelTree {
    let ls = s.structure();
    let d = ls.depth();
    let mut levels: Vec<BTreeSet<u64>> = Vec::with_capacity(d);
    for n in 1..=d {
        let shape = ls.prefix(n);
        let (src, dst) = (s.level(n), s2.level(n));
        let parent_ok = |sigma: u64| n == 1 || levels[n - 2].contains(&(sigma / ls.fanout(n - 1)));
        let level: BTreeSet<u64> = if (n > 1 && levels[n - 2].is_empty()) || src.len() != dst.len()
        {
            BTreeSet::new()
        } else if let Some(&s0) = src.first() {
            dst.iter()
                .map(|&t| shape.sub_idx(t, s0))
                .filter(|&sigma| ambient.level(n).contains(&sigma) && parent_ok(sigma))
                .filter(|&sigma| src.iter().all(|&x| dst.contains(&shape.add_idx(x, sigma))))
                .collect()
        } else if n == 1 {
            ambient.level(1).clone()
        } else {
            levels[n - 2]
                .iter()
                .flat_map(|&p| ls.children(p, n - 1))
                .filter(|c| ambient.level(n).contains(c))
                .collect()
        };
        levels.push(level);
    }
    LevelTree::from_parts_unchecked(ls.clone(), levels)
}

/// `Psi((S_i), (S'_i))`: levelwise intersection of the `Phi(S_i, S'_i)`.
/// An empty list gives the ambient tree.
pub fn psi(pairs: &[(LevelTree, LevelTree)], ambient: &LevelTree) -> Result<LevelTree, TreeError> {
    let mut acc = ambient.clone();
    for (s, s2) in pairs {
        check_shared(s, s2, ambient)?;
        let p = phi_unchecked(s, s2, ambient);
        let levels = acc
            .levels()
            .iter()
            .zip(p.levels())
            .map(|(a, b)| a.intersection(b).copied().collect())
            .collect();
        acc = LevelTree::from_parts_unchecked(ambient.structure().clone(), levels);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitDecision {
    pub equivalent_at_depth: bool,
    /// Least depth-`d` node of `Phi(S, S')`, when there is one.
    pub translator: Option<TreeNode>,
}

/// Whether some `x` in the ambient tree at depth `d` carries `S` onto `S'`.
pub fn orbit_equivalent(
    s: &LevelTree,
    s2: &LevelTree,
    ambient: &LevelTree,
) -> Result<OrbitDecision, TreeError> {
    let p = phi(s, s2, ambient)?;
    let d = p.depth();
    let translator = p.level(d).first().map(|&idx| p.structure().decode(d, idx));
    Ok(OrbitDecision {
        equivalent_at_depth: translator.is_some(),
        translator,
    })
}

//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's algorithms; only its data types are used to move values
//! in and out.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use cosettree::abelian::GroupExpr;
use cosettree::trees::{Caps, LevelStructure, LevelTree};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn data(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

// ---------------------------------------------------------------------------
// Groups: truncation model

/// First primes, enough for every generated expression.
pub const PRIMES: [u64; 30] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    Cyc(u64),
    Free,
}

/// A finite stand-in for `g`: every `^{<w}` becomes `k` copies, every
/// `Z(p^inf)` becomes `Z(p^k)`, and infinite prime ranges are cut at
/// `PRIMES`. Infinite `G[p]` shows up as growth in `k`.
fn truncate(g: &GroupExpr, k: u32, out: &mut Vec<Piece>) {
    match g {
        GroupExpr::Zero => {}
        GroupExpr::IntZ | GroupExpr::RatQ => out.push(Piece::Free),
        GroupExpr::Cyclic(n) => out.push(Piece::Cyc(*n)),
        GroupExpr::Quasicyclic(q) => out.push(Piece::Cyc(q.pow(k))),
        GroupExpr::Sum(parts) => parts.iter().for_each(|p| truncate(p, k, out)),
        GroupExpr::FinSup(b) => (0..k).for_each(|_| truncate(b, k, out)),
        GroupExpr::AInfinity => {
            for &p in &PRIMES {
                (0..k).for_each(|_| out.push(Piece::Cyc(p.pow(k))));
            }
            (0..k).for_each(|_| out.push(Piece::Free));
        }
        GroupExpr::PrimeTail { from } => {
            for &p in PRIMES.iter().skip(*from) {
                (0..k).for_each(|_| out.push(Piece::Cyc(p.pow(k))));
            }
        }
    }
}

fn pieces(g: &GroupExpr, k: u32) -> Vec<Piece> {
    let mut out = Vec::new();
    truncate(g, k, &mut out);
    out
}

/// `log_p |T_k[p]|` of the truncation.
fn p_exponent(g: &GroupExpr, p: u64, k: u32) -> usize {
    pieces(g, k)
        .iter()
        .filter(|x| matches!(x, Piece::Cyc(n) if n % p == 0))
        .count()
}

pub fn model_torsion(g: &GroupExpr) -> bool {
    !pieces(g, 2).contains(&Piece::Free)
}

/// `dim G[p]` when finite.
pub fn model_p_rank(g: &GroupExpr, p: u64) -> Option<usize> {
    let (a, b) = (p_exponent(g, p, 2), p_exponent(g, p, 3));
    (a == b).then_some(a)
}

pub fn model_p_compact(g: &GroupExpr, p: u64) -> bool {
    model_torsion(g) && model_p_rank(g, p).is_some()
}

/// Random expression of bounded depth; torsion-biased so that tame specs
/// are common.
pub fn random_expr(rng: &mut impl Rng, depth: u32) -> GroupExpr {
    let leaf = depth == 0 || rng.gen_bool(0.45);
    if leaf {
        match rng.gen_range(0..20) {
            0 => GroupExpr::Zero,
            1 => GroupExpr::IntZ,
            2 => GroupExpr::RatQ,
            3 => GroupExpr::AInfinity,
            4 => GroupExpr::PrimeTail {
                from: rng.gen_range(0..6),
            },
            5..=11 => GroupExpr::Cyclic(rng.gen_range(2..=60)),
            _ => GroupExpr::Quasicyclic(*PRIMES[..6].choose(rng).unwrap()),
        }
    } else if rng.gen_bool(0.6) {
        let n = rng.gen_range(1..=3);
        GroupExpr::Sum((0..n).map(|_| random_expr(rng, depth - 1)).collect())
    } else {
        GroupExpr::FinSup(Box::new(random_expr(rng, depth - 1)))
    }
}

/// Like [`random_expr`] but without non-torsion leaves.
pub fn random_torsion_expr(rng: &mut impl Rng, depth: u32) -> GroupExpr {
    loop {
        let g = random_expr(rng, depth);
        if model_torsion(&g) {
            return g;
        }
    }
}

// ---------------------------------------------------------------------------
// Trees: nodes as flat residue vectors

/// Element of a product of cyclic groups.
pub type Elem = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OTree {
    /// Cyclic orders of each level group `H_i`.
    pub shape: Vec<Vec<u64>>,
    /// `levels[n-1]` holds the nodes of length `n`, flattened.
    pub levels: Vec<BTreeSet<Elem>>,
}

impl OTree {
    pub fn depth(&self) -> usize {
        self.shape.len()
    }

    /// Cyclic orders of `H^n`.
    pub fn moduli(&self, n: usize) -> Vec<u64> {
        self.shape[..n].iter().flatten().copied().collect()
    }

    pub fn width(&self, n: usize) -> usize {
        self.shape[..n].iter().map(Vec::len).sum()
    }

    pub fn empty(shape: Vec<Vec<u64>>) -> Self {
        let d = shape.len();
        OTree {
            shape,
            levels: vec![BTreeSet::new(); d],
        }
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(BTreeSet::len).sum()
    }

    pub fn is_prefix_closed(&self) -> bool {
        (1..self.depth()).all(|i| {
            let w = self.width(i);
            self.levels[i]
                .iter()
                .all(|x| self.levels[i - 1].contains(&x[..w]))
        })
    }
}

pub fn add(m: &[u64], a: &[u64], b: &[u64]) -> Elem {
    a.iter()
        .zip(b)
        .zip(m)
        .map(|((x, y), n)| (x + y) % n)
        .collect()
}

pub fn sub(m: &[u64], a: &[u64], b: &[u64]) -> Elem {
    a.iter()
        .zip(b)
        .zip(m)
        .map(|((x, y), n)| (x + n - y) % n)
        .collect()
}

/// All elements of the product of cyclic groups with orders `m`.
pub fn elements(m: &[u64]) -> Vec<Elem> {
    let mut out = vec![vec![]];
    for &n in m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |r| {
                    let mut w = v.clone();
                    w.push(r);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn is_subgroup(m: &[u64], set: &BTreeSet<Elem>) -> bool {
    set.contains(&vec![0; m.len()])
        && set
            .iter()
            .all(|a| set.iter().all(|b| set.contains(&sub(m, a, b))))
}

/// Nonempty and closed under `a - b + c`.
pub fn is_coset(m: &[u64], set: &BTreeSet<Elem>) -> bool {
    let Some(a0) = set.first() else { return false };
    let shifted: BTreeSet<Elem> = set.iter().map(|x| sub(m, x, a0)).collect();
    is_subgroup(m, &shifted)
}

pub fn o_is_group_tree(t: &OTree) -> bool {
    (1..=t.depth()).all(|n| is_subgroup(&t.moduli(n), &t.levels[n - 1]))
}

pub fn o_is_coset_tree(t: &OTree) -> bool {
    (1..=t.depth()).all(|n| t.levels[n - 1].is_empty() || is_coset(&t.moduli(n), &t.levels[n - 1]))
}

/// Nodes with a proper extension in `t`; in open mode depth-`d` nodes count
/// as extendable.
pub fn o_derivative(t: &OTree, open: bool) -> OTree {
    let d = t.depth();
    let mut out = OTree::empty(t.shape.clone());
    for n in 1..=d {
        let w = t.width(n);
        for sigma in &t.levels[n - 1] {
            let keep = (open && n == d)
                || (n + 1..=d).any(|m| t.levels[m - 1].iter().any(|tau| tau[..w] == sigma[..]));
            if keep {
                out.levels[n - 1].insert(sigma.clone());
            }
        }
    }
    out
}

/// A node with its rank; `None` means it survives every derivative.
pub type RankedNode = (Elem, Option<u64>);

/// Rank of every node and the height.
pub fn o_ranks(t: &OTree, open: bool) -> (Vec<Vec<RankedNode>>, u64) {
    let mut seq = vec![t.clone()];
    loop {
        let next = o_derivative(seq.last().unwrap(), open);
        if &next == seq.last().unwrap() {
            break;
        }
        seq.push(next);
    }
    let core = seq.last().unwrap();
    let ranks = (0..t.depth())
        .map(|i| {
            t.levels[i]
                .iter()
                .map(|x| {
                    if core.levels[i].contains(x) {
                        (x.clone(), None)
                    } else {
                        let k = seq.iter().position(|s| !s.levels[i].contains(x)).unwrap();
                        (x.clone(), Some(k as u64 - 1))
                    }
                })
                .collect()
        })
        .collect();
    (ranks, seq.len() as u64 - 1)
}

/// `t + x` for `x ∈ H^d`.
pub fn o_translate(t: &OTree, x: &[u64]) -> OTree {
    let mut out = OTree::empty(t.shape.clone());
    for n in 1..=t.depth() {
        let (m, w) = (t.moduli(n), t.width(n));
        out.levels[n - 1] = t.levels[n - 1]
            .iter()
            .map(|a| add(&m, a, &x[..w]))
            .collect();
    }
    out
}

/// Every `x ∈ H^d` with `x|n + S_n = S'_n` at every level, by brute force.
pub fn o_translators(s: &OTree, s2: &OTree) -> Vec<Elem> {
    let d = s.depth();
    elements(&s.moduli(d))
        .into_iter()
        .filter(|x| o_translate(s, x) == *s2)
        .collect()
}

pub fn structure(shape: &[Vec<u64>]) -> LevelStructure {
    let levels = shape
        .iter()
        .map(|o| cosettree::abelian::FiniteAbelian::new(o.clone()).unwrap())
        .collect();
    LevelStructure::new(levels, Caps::default()).unwrap()
}

fn split(shape: &[Vec<u64>], flat: &[u64]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut at = 0;
    for level in shape {
        if at >= flat.len() {
            break;
        }
        out.push(flat[at..at + level.len()].to_vec());
        at += level.len();
    }
    out
}

pub fn to_level_tree(t: &OTree) -> LevelTree {
    let ls = structure(&t.shape);
    let nodes: Vec<_> = t
        .levels
        .iter()
        .flatten()
        .map(|x| ls.node(split(&t.shape, x)).unwrap())
        .collect();
    LevelTree::from_nodes(ls, nodes, Caps::default()).unwrap()
}

pub fn from_level_tree(t: &LevelTree) -> OTree {
    let shape: Vec<Vec<u64>> = t
        .structure()
        .levels()
        .iter()
        .map(|l| l.orders().to_vec())
        .collect();
    let mut out = OTree::empty(shape);
    for n in 1..=t.depth() {
        out.levels[n - 1] = t
            .nodes_at(n)
            .map(|node| node.coords().iter().flatten().copied().collect())
            .collect();
    }
    out
}

/// Flat residue vector of a library node.
pub fn flat(node: &cosettree::trees::TreeNode) -> Elem {
    node.coords().iter().flatten().copied().collect()
}

// ---------------------------------------------------------------------------
// Tree generators

const LEVEL_SHAPES: [&[u64]; 10] = [
    &[2],
    &[3],
    &[4],
    &[2, 2],
    &[5],
    &[6],
    &[2, 4],
    &[3, 3],
    &[8],
    &[2, 3],
];

/// Random level shape with `|H^d| <= max_order` and depth `1..=4`.
pub fn random_shape(rng: &mut impl Rng, max_order: u64) -> Vec<Vec<u64>> {
    let depth = rng.gen_range(1..=4);
    let mut shape: Vec<Vec<u64>> = Vec::new();
    let mut order = 1u64;
    for _ in 0..depth {
        let candidates: Vec<&[u64]> = LEVEL_SHAPES
            .iter()
            .copied()
            .filter(|l| order * l.iter().product::<u64>() <= max_order)
            .collect();
        let Some(l) = candidates.choose(rng) else {
            break;
        };
        order *= l.iter().product::<u64>();
        shape.push(l.to_vec());
    }
    if shape.is_empty() {
        shape.push(vec![2]);
    }
    shape
}

fn closure(m: &[u64], gens: &[Elem]) -> BTreeSet<Elem> {
    let mut set: BTreeSet<Elem> = BTreeSet::from([vec![0; m.len()]]);
    let mut frontier = vec![vec![0; m.len()]];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = add(m, &x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn random_elem(rng: &mut impl Rng, m: &[u64]) -> Elem {
    m.iter().map(|&n| rng.gen_range(0..n)).collect()
}

/// Random group tree: each level is generated by random lifts of elements
/// of the level above, so its projection stays inside that level.
pub fn random_group_tree(rng: &mut impl Rng, shape: Vec<Vec<u64>>) -> OTree {
    let mut t = OTree::empty(shape);
    for n in 1..=t.depth() {
        let m = t.moduli(n);
        let k = rng.gen_range(0..=2);
        let gens: Vec<Elem> = if n == 1 {
            (0..k).map(|_| random_elem(rng, &m)).collect()
        } else {
            let above: Vec<&Elem> = t.levels[n - 2].iter().collect();
            let own = &t.shape[n - 1];
            (0..k)
                .map(|_| {
                    let mut x = (*above.choose(rng).unwrap()).clone();
                    x.extend(random_elem(rng, own));
                    x
                })
                .collect()
        };
        t.levels[n - 1] = closure(&m, &gens);
    }
    t
}

/// A translate of a random group tree, sometimes cut off below a level.
pub fn random_coset_tree(rng: &mut impl Rng, shape: Vec<Vec<u64>>) -> OTree {
    let g = random_group_tree(rng, shape);
    let x = random_elem(rng, &g.moduli(g.depth()));
    let mut t = o_translate(&g, &x);
    if rng.gen_bool(0.2) {
        let cut = rng.gen_range(1..=t.depth());
        for level in t.levels.iter_mut().skip(cut) {
            level.clear();
        }
    }
    t
}

/// Random prefix-closed subset of the full tree.
pub fn random_tree(rng: &mut impl Rng, shape: Vec<Vec<u64>>) -> OTree {
    let mut t = OTree::empty(shape);
    let keep = rng.gen_range(0.2..0.9);
    for n in 1..=t.depth() {
        let own = elements(&t.shape[n - 1]);
        let parents: Vec<Elem> = if n == 1 {
            vec![vec![]]
        } else {
            t.levels[n - 2].iter().cloned().collect()
        };
        for p in parents {
            for c in &own {
                if rng.gen_bool(keep) {
                    let mut x = p.clone();
                    x.extend(c);
                    t.levels[n - 1].insert(x);
                }
            }
        }
    }
    t
}

/// Every prefix-closed tree over `shape` (including the empty one).
pub fn all_trees(shape: &[Vec<u64>]) -> Vec<OTree> {
    fn below(shape: &[Vec<u64>], n: usize, node: &Elem) -> Vec<Vec<Elem>> {
        // all subsets of descendants of `node` (length n) that are prefix-closed
        if n == shape.len() {
            return vec![vec![]];
        }
        let mut out: Vec<Vec<Elem>> = vec![vec![]];
        for c in elements(&shape[n]) {
            let mut child = node.clone();
            child.extend(c);
            let subs = below(shape, n + 1, &child);
            let mut next = Vec::new();
            for acc in &out {
                next.push(acc.clone());
                for s in &subs {
                    let mut v = acc.clone();
                    v.push(child.clone());
                    v.extend(s.iter().cloned());
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
    below(shape, 0, &vec![])
        .into_iter()
        .map(|nodes| {
            let mut t = OTree::empty(shape.to_vec());
            for x in nodes {
                let n = (1..=shape.len()).find(|&n| t.width(n) == x.len()).unwrap();
                t.levels[n - 1].insert(x);
            }
            t
        })
        .collect()
}

/// Small structures enumerated exhaustively.
pub fn tiny_shapes() -> Vec<Vec<Vec<u64>>> {
    vec![
        vec![vec![2]],
        vec![vec![6]],
        vec![vec![2, 2]],
        vec![vec![2], vec![2]],
        vec![vec![2], vec![3]],
        vec![vec![3], vec![2]],
        vec![vec![2], vec![4]],
        vec![vec![3], vec![3]],
        vec![vec![4], vec![2]],
        vec![vec![2, 2], vec![2]],
        vec![vec![2], vec![2], vec![2]],
    ]
}

// ---------------------------------------------------------------------------
// Ordinals below w^w as dense coefficient vectors

/// `coeffs[e]` is the coefficient of `w^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OOrd {
    pub coeffs: Vec<u64>,
}

impl OOrd {
    pub fn from_terms(terms: &[(u32, u64)]) -> Self {
        let top = terms.iter().map(|t| t.0 as usize + 1).max().unwrap_or(0);
        let mut coeffs = vec![0; top];
        for &(e, c) in terms {
            coeffs[e as usize] += c;
        }
        OOrd { coeffs }.trim()
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        self
    }

    /// Terms with decreasing exponents, zero coefficients dropped.
    pub fn terms(&self) -> Vec<(u32, u64)> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c > 0)
            .map(|(e, &c)| (e as u32, c))
            .collect()
    }

    /// `a + b`: terms of `a` below the leading exponent of `b` are absorbed.
    pub fn add(&self, b: &OOrd) -> OOrd {
        let Some(lead) = b.coeffs.len().checked_sub(1) else {
            return self.clone();
        };
        let mut coeffs = vec![0; self.coeffs.len().max(b.coeffs.len())];
        for (e, &c) in self.coeffs.iter().enumerate().skip(lead + 1) {
            coeffs[e] = c;
        }
        if let Some(&c) = self.coeffs.get(lead) {
            coeffs[lead] = c;
        }
        for (e, &c) in b.coeffs.iter().enumerate() {
            coeffs[e] += c;
        }
        OOrd { coeffs }.trim()
    }

    pub fn cmp(&self, b: &OOrd) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&b.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
    }
}

pub fn random_terms(rng: &mut impl Rng) -> Vec<(u32, u64)> {
    let mut exps: Vec<u32> = (0..6).filter(|_| rng.gen_bool(0.4)).collect();
    exps.reverse();
    exps.into_iter()
        .map(|e| (e, rng.gen_range(1..=5)))
        .collect()
}

// ---------------------------------------------------------------------------
// Misc

pub fn sorted_set<T: Ord + Clone>(xs: &[T]) -> BTreeSet<T> {
    xs.iter().cloned().collect()
}

pub fn distinct<T: std::hash::Hash + Eq + Clone>(xs: &[T]) -> usize {
    xs.iter().cloned().collect::<HashSet<_>>().len()
}

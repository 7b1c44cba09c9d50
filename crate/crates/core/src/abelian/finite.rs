//! Explicit finite abelian groups `Z(n_0) x ... x Z(n_k)` and their elements.
//!
//! Elements are residue tuples. For bulk work (the tree engine) an element is
//! also addressed by its mixed-radix index, with the first coordinate most
//! significant; numeric order on indices is then lexicographic order on
//! residue tuples.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::primes::{gcd, lcm};
use super::AbelianError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct FiniteAbelian {
    orders: Vec<u64>,
}

impl FiniteAbelian {
    pub fn new(orders: Vec<u64>) -> Result<Self, AbelianError> {
        if let Some(&bad) = orders.iter().find(|&&n| n == 0) {
            return Err(AbelianError::InvalidModulus(bad));
        }
        let shape = FiniteAbelian { orders };
        shape.try_order().ok_or(AbelianError::OrderOverflow)?;
        Ok(shape)
    }

    pub fn trivial() -> Self {
        FiniteAbelian { orders: Vec::new() }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    fn try_order(&self) -> Option<u64> {
        self.orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.try_order().expect("order checked at construction")
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.iter().all(|&n| n == 1)
    }

    /// Direct product `self x other`, coordinates of `self` first.
    pub fn product(&self, other: &FiniteAbelian) -> Result<FiniteAbelian, AbelianError> {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        FiniteAbelian::new(orders)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            shape: self.clone(),
            residues: vec![0; self.orders.len()],
        }
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement, AbelianError> {
        GroupElement::new(self.clone(), residues)
    }

    /// All elements in lexicographic residue order.
    pub fn enumerate(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| GroupElement {
            shape: self.clone(),
            residues: self.decode(i),
        })
    }

    pub fn check_residues(&self, residues: &[u64]) -> Result<(), AbelianError> {
        if residues.len() != self.orders.len() {
            return Err(AbelianError::ShapeMismatch {
                expected: self.orders.len(),
                found: residues.len(),
            });
        }
        for (i, (&r, &n)) in residues.iter().zip(&self.orders).enumerate() {
            if r >= n {
                return Err(AbelianError::ResidueOutOfRange {
                    coordinate: i,
                    residue: r,
                    order: n,
                });
            }
        }
        Ok(())
    }

    pub fn encode(&self, residues: &[u64]) -> u64 {
        debug_assert_eq!(residues.len(), self.orders.len());
        residues
            .iter()
            .zip(&self.orders)
            .fold(0u64, |acc, (&r, &n)| acc * n + r)
    }

    pub fn decode(&self, mut index: u64) -> Vec<u64> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &n) in out.iter_mut().zip(&self.orders).rev() {
            *slot = index % n;
            index /= n;
        }
        out
    }

    pub fn add_idx(&self, a: u64, b: u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for &n in self.orders.iter().rev() {
            let s = (a % n + b % n) % n;
            out += s * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub fn neg_idx(&self, a: u64) -> u64 {
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for &n in self.orders.iter().rev() {
            let r = a % n;
            out += ((n - r) % n) * place;
            place *= n;
            a /= n;
        }
        out
    }

    pub fn sub_idx(&self, a: u64, b: u64) -> u64 {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn element_order_idx(&self, a: u64) -> u64 {
        self.decode(a)
            .iter()
            .zip(&self.orders)
            .fold(1, |acc, (&r, &n)| lcm(acc, n / gcd(r, n)))
    }

    /// The subgroup generated by `set`, as sorted indices.
    pub fn closure_idx(&self, set: &BTreeSet<u64>) -> BTreeSet<u64> {
        let mut span: HashSet<u64> = HashSet::from([0]);
        for &x in set {
            if span.contains(&x) {
                continue;
            }
            let mut multiples = vec![0u64];
            let mut m = x;
            while m != 0 {
                multiples.push(m);
                m = self.add_idx(m, x);
            }
            let mut next = HashSet::with_capacity(span.len() * multiples.len());
            for &h in &span {
                for &k in &multiples {
                    next.insert(self.add_idx(h, k));
                }
            }
            span = next;
        }
        span.into_iter().collect()
    }

    pub fn is_subgroup_idx(&self, set: &BTreeSet<u64>) -> bool {
        set.contains(&0) && self.closure_idx(set).len() == set.len()
    }

    /// Nonempty and closed under `a - b + c`; checked as "`set - a` is a subgroup".
    pub fn is_coset_idx(&self, set: &BTreeSet<u64>) -> bool {
        let Some(&a) = set.first() else {
            return false;
        };
        let shifted: BTreeSet<u64> = set.iter().map(|&x| self.sub_idx(x, a)).collect();
        self.is_subgroup_idx(&shifted)
    }

    pub fn translate_idx(&self, set: &BTreeSet<u64>, by: u64) -> BTreeSet<u64> {
        set.iter().map(|&x| self.add_idx(x, by)).collect()
    }

    fn indices_of(&self, set: &BTreeSet<GroupElement>) -> Result<BTreeSet<u64>, AbelianError> {
        set.iter()
            .map(|e| {
                self.expect_same(e)?;
                Ok(self.encode(&e.residues))
            })
            .collect()
    }

    fn elements_of(&self, set: &BTreeSet<u64>) -> BTreeSet<GroupElement> {
        set.iter()
            .map(|&i| GroupElement {
                shape: self.clone(),
                residues: self.decode(i),
            })
            .collect()
    }

    fn expect_same(&self, e: &GroupElement) -> Result<(), AbelianError> {
        if &e.shape != self {
            return Err(AbelianError::ShapeMismatch {
                expected: self.rank(),
                found: e.shape.rank(),
            });
        }
        Ok(())
    }

    pub fn is_subgroup(&self, set: &BTreeSet<GroupElement>) -> Result<bool, AbelianError> {
        Ok(self.is_subgroup_idx(&self.indices_of(set)?))
    }

    pub fn is_coset(&self, set: &BTreeSet<GroupElement>) -> Result<bool, AbelianError> {
        Ok(self.is_coset_idx(&self.indices_of(set)?))
    }

    pub fn closure(
        &self,
        set: &BTreeSet<GroupElement>,
    ) -> Result<BTreeSet<GroupElement>, AbelianError> {
        Ok(self.elements_of(&self.closure_idx(&self.indices_of(set)?)))
    }
}

impl fmt::Display for FiniteAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z({n})")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A residue tuple paired with the shape it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    shape: FiniteAbelian,
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn new(shape: FiniteAbelian, residues: Vec<u64>) -> Result<Self, AbelianError> {
        shape.check_residues(&residues)?;
        Ok(GroupElement { shape, residues })
    }

    pub fn shape(&self) -> &FiniteAbelian {
        &self.shape
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn index(&self) -> u64 {
        self.shape.encode(&self.residues)
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    fn same_shape(&self, other: &GroupElement) -> Result<(), AbelianError> {
        self.shape.expect_same(other)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement, AbelianError> {
        self.same_shape(other)?;
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .zip(self.shape.orders())
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(GroupElement {
            shape: self.shape.clone(),
            residues,
        })
    }

    pub fn neg(&self) -> GroupElement {
        let residues = self
            .residues
            .iter()
            .zip(self.shape.orders())
            .map(|(&a, &n)| (n - a) % n)
            .collect();
        GroupElement {
            shape: self.shape.clone(),
            residues,
        }
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement, AbelianError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: u64) -> GroupElement {
        let residues = self
            .residues
            .iter()
            .zip(self.shape.orders())
            .map(|(&a, &n)| ((a as u128 * k as u128) % n as u128) as u64)
            .collect();
        GroupElement {
            shape: self.shape.clone(),
            residues,
        }
    }

    /// Least `n >= 1` with `n * self == 0`.
    pub fn order(&self) -> u64 {
        self.residues
            .iter()
            .zip(self.shape.orders())
            .fold(1, |acc, (&r, &n)| lcm(acc, n / gcd(r, n)))
    }

    /// Projection onto the coordinates `range` (the `pi_k` maps when a
    /// coordinate block is one level of a product).
    pub fn project(&self, range: std::ops::Range<usize>) -> Result<GroupElement, AbelianError> {
        if range.end > self.residues.len() {
            return Err(AbelianError::ShapeMismatch {
                expected: range.end,
                found: self.residues.len(),
            });
        }
        let shape = FiniteAbelian {
            orders: self.shape.orders[range.clone()].to_vec(),
        };
        Ok(GroupElement {
            shape,
            residues: self.residues[range].to_vec(),
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

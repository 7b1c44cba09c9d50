//! Eventually periodic sequences of groups, and regrouping them.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::abelian::primes::{nth_prime, prime_index};
use crate::abelian::GroupExpr;
use crate::universal::h_infinity;
use crate::FORMAT_TAG;

/// How a sequence of groups is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Factors `H_n` of a full product `∏ H_n`.
    Product,
    /// Quotients `G_k / G_{k+1}` of a filtration by open subgroups.
    Filtration,
}

/// The sequence after the prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TailRule {
    /// The cycle repeated forever.
    PeriodicCycle(Vec<GroupExpr>),
    /// Tail entry `j` is `Z(p_{offset+j}^inf)`.
    AllQuasicyclic { offset: usize },
    /// Tail entry `j` is the universal-product factor `H_{offset+j}`.
    HInfinityTail { offset: usize },
}

impl TailRule {
    pub fn entry(&self, j: usize) -> GroupExpr {
        match self {
            TailRule::PeriodicCycle(cycle) => cycle[j % cycle.len()].clone(),
            TailRule::AllQuasicyclic { offset } => GroupExpr::Quasicyclic(nth_prime(offset + j)),
            TailRule::HInfinityTail { offset } => h_infinity(offset + j),
        }
    }

    /// The same rule started `shift` entries later.
    fn shifted(&self, shift: usize) -> TailRule {
        match self {
            TailRule::PeriodicCycle(cycle) => {
                let mut c = cycle.clone();
                c.rotate_left(shift % cycle.len());
                TailRule::PeriodicCycle(c)
            }
            TailRule::AllQuasicyclic { offset } => TailRule::AllQuasicyclic {
                offset: offset + shift,
            },
            TailRule::HInfinityTail { offset } => TailRule::HInfinityTail {
                offset: offset + shift,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeqSpec {
    pub role: Role,
    pub prefix: Vec<GroupExpr>,
    pub tail: TailRule,
}

impl SeqSpec {
    pub fn product(prefix: Vec<GroupExpr>, tail: TailRule) -> Self {
        SeqSpec {
            role: Role::Product,
            prefix,
            tail,
        }
    }

    pub fn filtration(prefix: Vec<GroupExpr>, tail: TailRule) -> Self {
        SeqSpec {
            role: Role::Filtration,
            prefix,
            tail,
        }
    }

    /// The product spec of the universal group `H_inf`.
    pub fn h_infinity() -> Self {
        SeqSpec::product(vec![h_infinity(0)], TailRule::HInfinityTail { offset: 1 })
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        for (i, g) in self.prefix.iter().enumerate() {
            g.validate()
                .map_err(|e| ClassifyError::MalformedSpec(format!("prefix[{i}]: {e}")))?;
        }
        if let TailRule::PeriodicCycle(cycle) = &self.tail {
            if cycle.is_empty() {
                return Err(ClassifyError::MalformedSpec("tail cycle is empty".into()));
            }
            for (i, g) in cycle.iter().enumerate() {
                g.validate()
                    .map_err(|e| ClassifyError::MalformedSpec(format!("tail.cycle[{i}]: {e}")))?;
            }
        }
        Ok(())
    }

    /// Entry `i` of the sequence (`H_i`, or `G_i / G_{i+1}`).
    pub fn entry(&self, i: usize) -> GroupExpr {
        match self.prefix.get(i) {
            Some(g) => g.clone(),
            None => self.tail.entry(i - self.prefix.len()),
        }
    }

    pub fn entries(&self, range: std::ops::Range<usize>) -> Vec<GroupExpr> {
        range.map(|i| self.entry(i)).collect()
    }

    /// Least `n` such that every entry with index `>= n` is p-compact, or
    /// `None` if infinitely many entries fail.
    pub fn p_compact_from(&self, p: u64) -> Option<usize> {
        let prefix_bad = self
            .prefix
            .iter()
            .rposition(|g| !g.is_p_compact(p))
            .map_or(0, |i| i + 1);
        let len = self.prefix.len();
        let tail_bad = match &self.tail {
            TailRule::PeriodicCycle(cycle) => {
                if cycle.iter().any(|g| !g.is_p_compact(p)) {
                    return None;
                }
                0
            }
            TailRule::AllQuasicyclic { .. } => 0,
            // H_m is p_i-compact exactly when m > i
            TailRule::HInfinityTail { offset } => match prime_index(p) {
                Some(i) if i >= *offset => len + (i - offset) + 1,
                _ => 0,
            },
        };
        Some(prefix_bad.max(tail_bad))
    }

    /// Replaces blocks of consecutive entries by their sums.
    ///
    /// `cuts = [0, c_1, ..., c_r]` makes the blocks `[c_i, c_{i+1})` the new
    /// prefix; entries from `c_r` on form the new tail, which must start at or
    /// after the old one. With `tail_cycles = Some(k)` each new tail entry is
    /// the sum of `k` whole cycles (periodic tails only). For filtrations a
    /// block sum stands for the corresponding extension, which has the same
    /// torsion and p-compactness behaviour.
    pub fn regroup(
        &self,
        cuts: &[usize],
        tail_cycles: Option<usize>,
    ) -> Result<SeqSpec, ClassifyError> {
        let bad = |m: &str| Err(ClassifyError::BadCuts(m.to_string()));
        match cuts.first() {
            None => return bad("at least one cut is required"),
            Some(&c) if c != 0 => return bad("cuts must start at 0"),
            _ => {}
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return bad("cuts must be strictly increasing");
        }
        let last = *cuts.last().unwrap();
        if last < self.prefix.len() {
            return bad("the last cut must not fall inside the prefix");
        }
        let prefix = cuts
            .windows(2)
            .map(|w| block(self.entries(w[0]..w[1])))
            .collect();
        let shifted = self.tail.shifted(last - self.prefix.len());
        let tail = match (tail_cycles, shifted) {
            (None, t) => t,
            (Some(0), _) => return bad("a tail block needs at least one cycle"),
            (Some(k), TailRule::PeriodicCycle(cycle)) => {
                let parts: Vec<GroupExpr> = (0..k).flat_map(|_| cycle.iter().cloned()).collect();
                TailRule::PeriodicCycle(vec![block(parts)])
            }
            (Some(_), _) => return bad("builtin family tails cannot be grouped"),
        };
        Ok(SeqSpec {
            role: self.role,
            prefix,
            tail,
        })
    }

    /// Merges entries `0..=m` into entry 0, where `m` is the largest index of
    /// a non-torsion entry, so that every later entry is torsion.
    pub fn rearrange(&self) -> Result<SeqSpec, ClassifyError> {
        let len = self.prefix.len();
        let tail_nontorsion = match &self.tail {
            TailRule::PeriodicCycle(cycle) => {
                if cycle.iter().any(|g| !g.is_torsion()) {
                    return Err(ClassifyError::NonTorsionTail);
                }
                None
            }
            TailRule::AllQuasicyclic { .. } => None,
            TailRule::HInfinityTail { offset } => (*offset == 0).then_some(len),
        };
        let m = tail_nontorsion.or_else(|| self.prefix.iter().rposition(|g| !g.is_torsion()));
        match m {
            None | Some(0) => Ok(self.clone()),
            Some(m) if m < len => Ok(SeqSpec {
                role: self.role,
                prefix: std::iter::once(block(self.entries(0..m + 1)))
                    .chain(self.prefix[m + 1..].iter().cloned())
                    .collect(),
                tail: self.tail.clone(),
            }),
            Some(m) => self.regroup(&[0, m + 1], None),
        }
    }
}

fn block(mut parts: Vec<GroupExpr>) -> GroupExpr {
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        GroupExpr::Sum(parts)
    }
}

impl fmt::Display for SeqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[GroupExpr]| {
            v.iter()
                .map(GroupExpr::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "[{}] then ", list(&self.prefix))?;
        match &self.tail {
            TailRule::PeriodicCycle(c) => write!(f, "cycle [{}]", list(c)),
            TailRule::AllQuasicyclic { offset } => write!(f, "Zq(p_(n+{offset}))"),
            TailRule::HInfinityTail { offset } => write!(f, "H_(n+{offset})"),
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum TailRepr {
    Cycle { cycle: Vec<GroupExpr> },
    Family { family: &'static str, offset: usize },
}

#[derive(Serialize)]
struct SpecRepr {
    format: &'static str,
    role: Role,
    prefix: Vec<GroupExpr>,
    tail: TailRepr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecInput {
    #[serde(default)]
    format: Option<String>,
    role: Role,
    #[serde(default)]
    prefix: Vec<GroupExpr>,
    tail: serde_json::Value,
}

fn tail_from_json(v: &serde_json::Value) -> Result<TailRule, ClassifyError> {
    let bad = |m: String| Err(ClassifyError::MalformedSpec(m));
    let Some(obj) = v.as_object() else {
        return bad("tail: expected an object".into());
    };
    if let Some(cycle) = obj.get("cycle") {
        if obj.len() != 1 {
            return bad("tail: a cycle tail has no other keys".into());
        }
        let Some(items) = cycle.as_array() else {
            return bad("tail.cycle: expected an array of group expressions".into());
        };
        let mut out = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            let Some(text) = item.as_str() else {
                return bad(format!("tail.cycle[{i}]: expected a string"));
            };
            match text.parse::<GroupExpr>() {
                Ok(g) => out.push(g),
                Err(e) => return bad(format!("tail.cycle[{i}]: {e}")),
            }
        }
        return Ok(TailRule::PeriodicCycle(out));
    }
    let offset = match obj.get("offset") {
        None => 0,
        Some(o) => match o.as_u64() {
            Some(o) => o as usize,
            None => return bad("tail.offset: expected a natural number".into()),
        },
    };
    if let Some(k) = obj.keys().find(|k| *k != "family" && *k != "offset") {
        return bad(format!("tail: unknown key {k:?}"));
    }
    match obj.get("family").and_then(|f| f.as_str()) {
        Some("all_quasicyclic") => Ok(TailRule::AllQuasicyclic { offset }),
        Some("hinf") => Ok(TailRule::HInfinityTail { offset }),
        Some(other) => bad(format!(
            "tail.family: expected \"all_quasicyclic\" or \"hinf\", found {other:?}"
        )),
        None => bad("tail: expected a \"cycle\" or a \"family\"".into()),
    }
}

impl Serialize for SeqSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let tail = match &self.tail {
            TailRule::PeriodicCycle(cycle) => TailRepr::Cycle {
                cycle: cycle.clone(),
            },
            TailRule::AllQuasicyclic { offset } => TailRepr::Family {
                family: "all_quasicyclic",
                offset: *offset,
            },
            TailRule::HInfinityTail { offset } => TailRepr::Family {
                family: "hinf",
                offset: *offset,
            },
        };
        SpecRepr {
            format: FORMAT_TAG,
            role: self.role,
            prefix: self.prefix.clone(),
            tail,
        }
        .serialize(s)
    }
}

/// Parses a spec file:
/// `{"role":"product","prefix":["Z"],"tail":{"cycle":["Zq(2)"]}}` or with
/// `"tail":{"family":"all_quasicyclic"|"hinf","offset":n}`.
pub fn read_spec_json(text: &str) -> Result<SeqSpec, ClassifyError> {
    let repr: SpecInput = serde_json::from_str(text).map_err(|e| {
        ClassifyError::MalformedSpec(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    match &repr.format {
        Some(tag) if tag != FORMAT_TAG => {
            return Err(ClassifyError::MalformedSpec(format!(
                "format: expected \"{FORMAT_TAG}\", found \"{tag}\""
            )))
        }
        _ => {}
    }
    let tail = tail_from_json(&repr.tail)?;
    let spec = SeqSpec {
        role: repr.role,
        prefix: repr.prefix,
        tail,
    };
    spec.validate()?;
    Ok(spec)
}

//! Staircase group trees over levels `Z(p)^D`: level `n` of the tree allows
//! coordinate `j` to range over the span of the first `f(j, n)` standard basis
//! vectors. Shrinking `f` along `n` forces long chains of proper projections
//! and therefore large finite ranks.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::abelian::primes::is_prime;
use crate::abelian::FiniteAbelian;
use crate::trees::{rank_table, Caps, FrontierMode, LevelStructure, LevelTree, TreeError};
use crate::FORMAT_TAG;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension and depth must be at least 1")]
    Degenerate,
    #[error("profile: {0}")]
    BadProfile(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// `f(j, n)` for `1 <= j <= n <= d`, stored as `rows[j-1][n-j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Profile {
    rows: Vec<Vec<usize>>,
}

impl Profile {
    /// `f(j, n) = max(0, D - (n - j))`.
    pub fn staircase(dim: usize, depth: usize) -> Self {
        Profile::from_fn(depth, |j, n| dim.saturating_sub(n - j))
    }

    /// `f ≡ D`: every level is the full product.
    pub fn constant(dim: usize, depth: usize) -> Self {
        Profile::from_fn(depth, |_, _| dim)
    }

    pub fn from_fn(depth: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        Profile {
            rows: (1..=depth)
                .map(|j| (j..=depth).map(|n| f(j, n)).collect())
                .collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        Profile { rows }
    }

    pub fn get(&self, j: usize, n: usize) -> usize {
        self.rows[j - 1][n - j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    fn validate(&self, dim: usize, depth: usize) -> Result<(), WitnessError> {
        let bad = |m: String| Err(WitnessError::BadProfile(m));
        if self.rows.len() != depth {
            return bad(format!("expected {depth} rows, found {}", self.rows.len()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            let j = i + 1;
            if row.len() != depth - i {
                return bad(format!("row {j} must have {} entries", depth - i));
            }
            if row[0] != dim {
                return bad(format!("f({j},{j}) must equal the dimension {dim}"));
            }
            if let Some(w) = row.windows(2).position(|w| w[1] > w[0]) {
                return bad(format!("f({j},n) increases at n = {}", j + w + 1));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSpec {
    pub p: u64,
    pub dim: usize,
    pub depth: usize,
    pub profile: Profile,
}

impl WitnessSpec {
    pub fn staircase(p: u64, dim: usize, depth: usize) -> Self {
        WitnessSpec {
            p,
            dim,
            depth,
            profile: Profile::staircase(dim, depth),
        }
    }

    pub fn validate(&self) -> Result<(), WitnessError> {
        if !is_prime(self.p) {
            return Err(WitnessError::NotPrime(self.p));
        }
        if self.dim == 0 || self.depth == 0 {
            return Err(WitnessError::Degenerate);
        }
        self.profile.validate(self.dim, self.depth)
    }
}

/// Builds the witness tree. The order cap does not apply (the levels are
/// never enumerated in full); the node cap does.
pub fn staircase_witness(spec: &WitnessSpec, caps: Caps) -> Result<LevelTree, WitnessError> {
    spec.validate()?;
    let level = FiniteAbelian::new(vec![spec.p; spec.dim]).map_err(TreeError::from)?;
    let order_free = Caps {
        order: u64::MAX,
        nodes: caps.nodes,
    };
    let ls = LevelStructure::new(vec![level.clone(); spec.depth], order_free)?;
    let total = (spec.p as u128).checked_pow((spec.dim * spec.depth) as u32);
    if total.is_none_or(|t| t > u64::MAX as u128) {
        return Err(TreeError::CapExceeded {
            what: "order of H^d",
            value: total.unwrap_or(u128::MAX),
            cap: u64::MAX as u128,
        }
        .into());
    }

    // span[f] = level indices of vectors supported on the first f coordinates
    let span: Vec<Vec<u64>> = (0..=spec.dim)
        .map(|f| {
            let free = spec.p.pow(f as u32);
            let shift = spec.p.pow((spec.dim - f) as u32);
            (0..free).map(|v| v * shift).collect()
        })
        .collect();
    let h = level.order();

    let mut levels = Vec::with_capacity(spec.depth);
    let mut count = 0usize;
    for n in 1..=spec.depth {
        let mut current: Vec<u64> = vec![0];
        for j in 1..=n {
            let allowed = &span[spec.profile.get(j, n)];
            let next_len = current.len() * allowed.len();
            if count + next_len > caps.nodes {
                return Err(TreeError::CapExceeded {
                    what: "node count",
                    value: (count + next_len) as u128,
                    cap: caps.nodes as u128,
                }
                .into());
            }
            current = current
                .iter()
                .flat_map(|&prefix| allowed.iter().map(move |&v| prefix * h + v))
                .collect();
        }
        count += current.len();
        levels.push(current.into_iter().collect::<BTreeSet<u64>>());
    }
    Ok(LevelTree::from_indices(ls, levels, order_free)?)
}

/// Per-level maximum finite rank, `None` when every node at that level is
/// `Core` (or the level is empty).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankRow {
    pub level: usize,
    pub max_finite_rank: Option<u64>,
    pub core_nodes: usize,
}

pub fn rank_profile(
    spec: &WitnessSpec,
    mode: FrontierMode,
    caps: Caps,
) -> Result<Vec<RankRow>, WitnessError> {
    let t = staircase_witness(spec, caps)?;
    let table = rank_table(&t, mode);
    Ok((1..=t.depth())
        .map(|n| RankRow {
            level: n,
            max_finite_rank: table.max_finite(n),
            core_nodes: table.core_count(n),
        })
        .collect())
}

/// Reads a profile sidecar: `{"format":"cosettree/1","profile":[[f(1,1),...,f(1,d)],...]}`.
pub fn read_profile_json(text: &str) -> Result<Profile, WitnessError> {
    let v: Value = serde_json::from_str(text).map_err(|e| {
        WitnessError::BadProfile(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    if let Some(tag) = v.get("format") {
        if tag != FORMAT_TAG {
            return Err(WitnessError::BadProfile(format!(
                "format: expected \"{FORMAT_TAG}\", found {tag}"
            )));
        }
    }
    let rows = v
        .get("profile")
        .and_then(Value::as_array)
        .ok_or_else(|| WitnessError::BadProfile("profile: missing array of rows".into()))?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .and_then(|r| {
                    r.iter()
                        .map(|x| x.as_u64().map(|x| x as usize))
                        .collect::<Option<Vec<_>>>()
                })
                .ok_or_else(|| {
                    WitnessError::BadProfile(format!("profile[{i}]: expected natural numbers"))
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Profile::from_rows(rows))
}

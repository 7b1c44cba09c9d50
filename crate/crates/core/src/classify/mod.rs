//! Tameness of products and filtrations, with height and complexity bounds.
//!
//! A sequence is tame when, cofinitely, its entries are torsion and have
//! finitely many elements of each prime order. Only the tail decides this.

mod complexity;
mod spec;

pub use complexity::{complexity_simplify, ClassExpr, ComplexityClass};
pub use spec::{read_spec_json, Role, SeqSpec, TailRule};

use serde::Serialize;
use thiserror::Error;

use crate::abelian::primes::nth_prime;
use crate::abelian::{GroupExpr, PrimeSet};
use crate::ordinal::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("malformed spec: {0}")]
    MalformedSpec(String),
    #[error("bad cuts: {0}")]
    BadCuts(String),
    #[error("no bounds for a group that is not tame")]
    NotTameTier,
    #[error("unsupported class expression: {0}")]
    UnsupportedExpression(String),
    #[error("the tail has infinitely many non-torsion entries")]
    NonTorsionTail,
    #[error("expected a {expected:?} spec")]
    WrongRole { expected: Role },
}

/// A canonical closed subgroup witnessing non-tameness.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// `Z^w`.
    ZOmega,
    /// `(Z(p)^{<w})^w`.
    ZpFinSupOmega { prime: u64 },
    /// `(Z(p_i)^{<w})^w` for every `i >= from_index`.
    ZpFinSupOmegaCofinite { from_index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    AllPCompact,
    AllTorsion,
    TameGeneral,
    NotTame,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Group-tree heights are at most this.
    pub group_tree: Ordinal,
    /// Coset-tree heights are strictly below this.
    pub coset_tree: Ordinal,
    pub complexity: ComplexityClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TamenessReport {
    pub role: Role,
    pub tame: bool,
    pub nontorsion_tail: bool,
    pub bad_tail_primes: PrimeSet,
    pub obstructions: Vec<Obstruction>,
    pub tier: Tier,
    pub locally_compact: bool,
    pub group_tree_bound: Option<Ordinal>,
    pub coset_tree_bound: Option<Ordinal>,
    pub complexity_bound: Option<ComplexityClass>,
    pub notes: Vec<String>,
}

/// Bounds attached to a tier. Locally compact groups are handled by the
/// caller, which lowers the complexity to `E0`.
pub fn bounds_for_tier(tier: Tier, _role: Role) -> Result<Bounds, ClassifyError> {
    let (k, c) = match tier {
        Tier::AllPCompact => (1, 1),
        Tier::AllTorsion => (2, 2),
        Tier::TameGeneral => (3, 3),
        Tier::NotTame => return Err(ClassifyError::NotTameTier),
    };
    Ok(Bounds {
        group_tree: Ordinal::omega_times(k),
        coset_tree: Ordinal::omega_times(k + 1),
        complexity: ComplexityClass::E0OmegaPlus(c),
    })
}

pub fn classify_product(spec: &SeqSpec) -> Result<TamenessReport, ClassifyError> {
    if spec.role != Role::Product {
        return Err(ClassifyError::WrongRole {
            expected: Role::Product,
        });
    }
    classify(spec)
}

pub fn classify_filtration(spec: &SeqSpec) -> Result<TamenessReport, ClassifyError> {
    if spec.role != Role::Filtration {
        return Err(ClassifyError::WrongRole {
            expected: Role::Filtration,
        });
    }
    classify(spec)
}

/// Dispatches on the spec's role.
pub fn classify(spec: &SeqSpec) -> Result<TamenessReport, ClassifyError> {
    spec.validate()?;
    // Only periodic tails can fail: each builtin family entry is torsion
    // from its second member on, and fails p-compactness for a given prime
    // at finitely many members.
    let (nontorsion_tail, bad_tail_primes) = match &spec.tail {
        TailRule::PeriodicCycle(cycle) => (
            cycle.iter().any(|g| !g.is_torsion()),
            cycle
                .iter()
                .fold(PrimeSet::empty(), |acc, g| acc.union(&g.infinite_p_part())),
        ),
        TailRule::AllQuasicyclic { .. } | TailRule::HInfinityTail { .. } => {
            (false, PrimeSet::empty())
        }
    };
    let obstructions = obstructions(nontorsion_tail, &bad_tail_primes);
    let tame = obstructions.is_empty();

    let entry_ok = |g: &GroupExpr| g.is_torsion() && g.infinite_p_part().is_empty();
    let (all_p_compact, all_torsion) = match &spec.tail {
        TailRule::PeriodicCycle(cycle) => (
            spec.prefix.iter().chain(cycle).all(entry_ok),
            spec.prefix.iter().chain(cycle).all(GroupExpr::is_torsion),
        ),
        TailRule::AllQuasicyclic { .. } => (
            spec.prefix.iter().all(entry_ok),
            spec.prefix.iter().all(GroupExpr::is_torsion),
        ),
        // every H_m has a Ptail summand; only H_0 is non-torsion
        TailRule::HInfinityTail { offset } => (
            false,
            *offset > 0 && spec.prefix.iter().all(GroupExpr::is_torsion),
        ),
    };
    let tier = if !tame {
        Tier::NotTame
    } else if all_p_compact {
        Tier::AllPCompact
    } else if all_torsion {
        Tier::AllTorsion
    } else {
        Tier::TameGeneral
    };
    let locally_compact = match &spec.tail {
        TailRule::PeriodicCycle(cycle) => cycle.iter().all(GroupExpr::is_finite),
        _ => false,
    };

    let mut notes = Vec::new();
    let (mut group_tree_bound, mut coset_tree_bound, mut complexity_bound) = (None, None, None);
    if tame {
        let b = bounds_for_tier(tier, spec.role)?;
        notes.push(format!(
            "group-tree heights are at most {}; coset-tree heights are strictly below {}",
            b.group_tree, b.coset_tree
        ));
        if tier == Tier::TameGeneral {
            notes.push(
                "the bound w*3 applies after merging the non-torsion coordinates into \
                 coordinate 0 and is not known sharp"
                    .into(),
            );
        }
        let complexity = match (locally_compact, spec.role) {
            (true, Role::Filtration) => {
                notes.push(
                    "every tail quotient is finite, so the group is locally compact and its \
                     orbit equivalence relations are essentially hyperfinite"
                        .into(),
                );
                ComplexityClass::E0
            }
            (true, Role::Product) => {
                notes.push(
                    "every tail factor is finite, so the group is locally compact; the \
                     product report keeps the tier bound"
                        .into(),
                );
                b.complexity
            }
            (false, _) => b.complexity,
        };
        notes.push(format!(
            "orbit equivalence relations of Borel actions are Borel reducible to {complexity}"
        ));
        group_tree_bound = Some(b.group_tree);
        coset_tree_bound = Some(b.coset_tree);
        complexity_bound = Some(complexity);
    } else {
        let names: Vec<String> = obstructions.iter().map(obstruction_name).collect();
        notes.push(format!(
            "not tame: contains a closed subgroup isomorphic to {}",
            names.join(" and to ")
        ));
    }
    if spec.role == Role::Filtration {
        notes.push(
            "filtration input: the verdict is exactly the cofinite torsion and \
             finite-order-p criterion on the given quotients"
                .into(),
        );
    }

    Ok(TamenessReport {
        role: spec.role,
        tame,
        nontorsion_tail,
        bad_tail_primes,
        obstructions,
        tier,
        locally_compact,
        group_tree_bound,
        coset_tree_bound,
        complexity_bound,
        notes,
    })
}

fn obstructions(nontorsion: bool, bad: &PrimeSet) -> Vec<Obstruction> {
    let mut out = Vec::new();
    if nontorsion {
        out.push(Obstruction::ZOmega);
    }
    // pull listed primes just below the cofinite part into it
    let mut from = bad.cofinite_from();
    while let Some(k) = from {
        if k > 0 && bad.finite_part().contains(&nth_prime(k - 1)) {
            from = Some(k - 1);
        } else {
            break;
        }
    }
    for &p in bad.finite_part() {
        let covered =
            from.is_some_and(|k| crate::abelian::primes::prime_index(p).is_some_and(|i| i >= k));
        if !covered {
            out.push(Obstruction::ZpFinSupOmega { prime: p });
        }
    }
    if let Some(k) = from {
        out.push(Obstruction::ZpFinSupOmegaCofinite { from_index: k });
    }
    out
}

fn obstruction_name(o: &Obstruction) -> String {
    match o {
        Obstruction::ZOmega => "Z^w".into(),
        Obstruction::ZpFinSupOmega { prime } => format!("(Z({prime})^<w)^w"),
        Obstruction::ZpFinSupOmegaCofinite { from_index } => {
            format!("(Z(p_i)^<w)^w for every i >= {from_index}")
        }
    }
}

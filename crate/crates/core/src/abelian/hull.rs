//! Divisible hulls of torsion groups and embeddability into divisible
//! torsion groups, compared prime by prime.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::expr::GroupExpr;
use super::primes::{nth_prime, prime_factors, prime_index};
use super::AbelianError;

/// Number of `Z(p^inf)` summands: finite, or countably many (`Z(p^inf)^{<w}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u64),
    FinSup,
}

impl Multiplicity {
    pub fn is_zero(&self) -> bool {
        *self == Multiplicity::Finite(0)
    }

    fn add(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::FinSup,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::FinSup => write!(f, "finsup"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(m) => s.serialize_u64(*m),
            Multiplicity::FinSup => s.serialize_str("finsup"),
        }
    }
}

/// `(+)_p Z(p^inf)^{m_p}`, optionally with every prime `p_i`, `i >= finsup_from`,
/// carrying multiplicity `FinSup`. Table entries at or beyond `finsup_from`
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DivNormalForm {
    table: BTreeMap<u64, Multiplicity>,
    finsup_from: Option<usize>,
}

impl DivNormalForm {
    pub fn new() -> Self {
        DivNormalForm::default()
    }

    pub fn from_table(
        entries: impl IntoIterator<Item = (u64, Multiplicity)>,
        finsup_from: Option<usize>,
    ) -> Result<Self, AbelianError> {
        let mut out = DivNormalForm {
            table: BTreeMap::new(),
            finsup_from,
        };
        for (p, m) in entries {
            if prime_index(p).is_none() {
                return Err(AbelianError::NotPrime(p));
            }
            out.add(p, m);
        }
        Ok(out)
    }

    pub fn multiplicity(&self, p: u64) -> Multiplicity {
        if let (Some(k), Some(i)) = (self.finsup_from, prime_index(p)) {
            if i >= k {
                return Multiplicity::FinSup;
            }
        }
        self.table
            .get(&p)
            .copied()
            .unwrap_or(Multiplicity::Finite(0))
    }

    pub fn table(&self) -> &BTreeMap<u64, Multiplicity> {
        &self.table
    }

    pub fn finsup_from(&self) -> Option<usize> {
        self.finsup_from
    }

    fn add(&mut self, p: u64, m: Multiplicity) {
        if m.is_zero() || self.covered(p) {
            return;
        }
        let slot = self.table.entry(p).or_insert(Multiplicity::Finite(0));
        *slot = slot.add(m);
    }

    fn covered(&self, p: u64) -> bool {
        matches!((self.finsup_from, prime_index(p)), (Some(k), Some(i)) if i >= k)
    }

    fn set_finsup_from(&mut self, k: usize) {
        let k = self.finsup_from.map_or(k, |old| old.min(k));
        self.finsup_from = Some(k);
        self.table
            .retain(|&p, _| prime_index(p).is_some_and(|i| i < k));
    }

    fn merge(&mut self, other: &DivNormalForm) {
        if let Some(k) = other.finsup_from {
            self.set_finsup_from(k);
        }
        for (&p, &m) in &other.table {
            self.add(p, m);
        }
    }

    /// Replaces every nonzero multiplicity by `FinSup` (the hull of `A^{<w}`).
    fn fin_sup_power(&self) -> DivNormalForm {
        DivNormalForm {
            table: self
                .table
                .keys()
                .map(|&p| (p, Multiplicity::FinSup))
                .collect(),
            finsup_from: self.finsup_from,
        }
    }

    /// Largest prime index that needs an explicit row when comparing, plus one.
    fn horizon(&self) -> usize {
        let table_max = self
            .table
            .keys()
            .filter_map(|&p| prime_index(p))
            .max()
            .map_or(0, |i| i + 1);
        table_max.max(self.finsup_from.unwrap_or(0))
    }

    /// The group as an expression: `sum(Zq(p),..., finsup(Zq(q)),..., Ptail(k))`.
    pub fn to_expr(&self) -> GroupExpr {
        let mut parts = Vec::new();
        for (&p, &m) in &self.table {
            match m {
                Multiplicity::Finite(k) => {
                    parts.extend((0..k).map(|_| GroupExpr::Quasicyclic(p)));
                }
                Multiplicity::FinSup => parts.push(GroupExpr::fin_sup(GroupExpr::Quasicyclic(p))),
            }
        }
        if let Some(k) = self.finsup_from {
            parts.push(GroupExpr::PrimeTail { from: k });
        }
        GroupExpr::Sum(parts).normalize()
    }
}

impl Serialize for DivNormalForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            multiplicities: BTreeMap<String, Multiplicity>,
            finsup_from_index: Option<usize>,
        }
        Repr {
            multiplicities: self
                .table
                .iter()
                .map(|(p, m)| (p.to_string(), *m))
                .collect(),
            finsup_from_index: self.finsup_from,
        }
        .serialize(s)
    }
}

impl fmt::Display for DivNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .table
            .iter()
            .map(|(p, m)| format!("{p} -> {m}"))
            .collect();
        write!(f, "{{{}}}", rows.join(", "))?;
        if let Some(k) = self.finsup_from {
            write!(f, " + finsup for p_i, i >= {k}")?;
        }
        Ok(())
    }
}

/// Divisible torsion group containing `g`: each cyclic p-power factor and
/// each `Z(p^inf)` contributes one `Z(p^inf)`; `A^{<w}` contributes `FinSup`.
pub fn divisible_hull(g: &GroupExpr) -> Result<DivNormalForm, AbelianError> {
    if !g.is_torsion() {
        return Err(AbelianError::NonTorsionInput);
    }
    Ok(hull_unchecked(g))
}

fn hull_unchecked(g: &GroupExpr) -> DivNormalForm {
    let mut out = DivNormalForm::new();
    match g {
        GroupExpr::Cyclic(n) => {
            for p in prime_factors(*n) {
                out.add(p, Multiplicity::Finite(1));
            }
        }
        GroupExpr::Quasicyclic(p) => out.add(*p, Multiplicity::Finite(1)),
        GroupExpr::Sum(parts) => {
            for part in parts {
                out.merge(&hull_unchecked(part));
            }
        }
        GroupExpr::FinSup(b) => out = hull_unchecked(b).fin_sup_power(),
        GroupExpr::PrimeTail { from } => out.set_finsup_from(*from),
        GroupExpr::Zero | GroupExpr::IntZ | GroupExpr::RatQ | GroupExpr::AInfinity => {}
    }
    out
}

/// Exact normal form of an expression that is already divisible torsion
/// (built from `Zq`, `finsup`, `Ptail`, sums, `0`).
fn divisible_form(k: &GroupExpr) -> Result<DivNormalForm, AbelianError> {
    fn check(k: &GroupExpr) -> Result<(), AbelianError> {
        match k {
            GroupExpr::Zero | GroupExpr::Quasicyclic(_) | GroupExpr::PrimeTail { .. } => Ok(()),
            GroupExpr::Sum(parts) => parts.iter().try_for_each(check),
            GroupExpr::FinSup(b) => check(b),
            other => Err(AbelianError::UnsupportedComparison(format!(
                "target summand {other} is not divisible torsion"
            ))),
        }
    }
    check(k)?;
    Ok(hull_unchecked(k))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbedSource {
    Hull(DivNormalForm),
    Expr(GroupExpr),
}

impl From<DivNormalForm> for EmbedSource {
    fn from(h: DivNormalForm) -> Self {
        EmbedSource::Hull(h)
    }
}

impl From<GroupExpr> for EmbedSource {
    fn from(g: GroupExpr) -> Self {
        EmbedSource::Expr(g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeComparison {
    pub prime: u64,
    pub index: usize,
    pub source: Multiplicity,
    pub target: Multiplicity,
    pub ok: bool,
}

/// Comparison standing for every prime `p_i` with `i >= from_index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailComparison {
    pub from_index: usize,
    pub source: Multiplicity,
    pub target: Multiplicity,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbedCertificate {
    pub embeds: bool,
    /// The target has an `A_inf` summand, which contains every countable
    /// abelian group.
    pub via_universality: bool,
    pub rows: Vec<PrimeComparison>,
    pub tail: Option<TailComparison>,
}

fn mult_le(a: Multiplicity, b: Multiplicity) -> bool {
    match (a, b) {
        (_, Multiplicity::FinSup) => true,
        (Multiplicity::FinSup, Multiplicity::Finite(_)) => false,
        (Multiplicity::Finite(x), Multiplicity::Finite(y)) => x <= y,
    }
}

fn compare(source: &DivNormalForm, target: &DivNormalForm) -> EmbedCertificate {
    let horizon = source.horizon().max(target.horizon());
    let rows: Vec<PrimeComparison> = (0..horizon)
        .map(|i| {
            let p = nth_prime(i);
            let (s, t) = (source.multiplicity(p), target.multiplicity(p));
            PrimeComparison {
                prime: p,
                index: i,
                source: s,
                target: t,
                ok: mult_le(s, t),
            }
        })
        .filter(|row| !(row.source.is_zero() && row.target.is_zero()))
        .collect();
    let tail = (source.finsup_from.is_some() || target.finsup_from.is_some()).then(|| {
        let p = nth_prime(horizon);
        let (s, t) = (source.multiplicity(p), target.multiplicity(p));
        TailComparison {
            from_index: horizon,
            source: s,
            target: t,
            ok: mult_le(s, t),
        }
    });
    let embeds = rows.iter().all(|r| r.ok) && tail.as_ref().is_none_or(|t| t.ok);
    EmbedCertificate {
        embeds,
        via_universality: false,
        rows,
        tail,
    }
}

/// Decides whether `source` is isomorphic to a subgroup of `target`.
///
/// Supported inputs: any `source` when `target` has an `A_inf` summand;
/// otherwise a torsion `source` and a divisible torsion `target`, in which
/// case the answer is exact because the divisible hull is the injective
/// envelope.
pub fn embeds(
    source: impl Into<EmbedSource>,
    target: &GroupExpr,
) -> Result<EmbedCertificate, AbelianError> {
    let source = source.into();
    if target.has_a_infinity_summand() {
        return Ok(EmbedCertificate {
            embeds: true,
            via_universality: true,
            rows: Vec::new(),
            tail: None,
        });
    }
    let source = match source {
        EmbedSource::Hull(h) => h,
        EmbedSource::Expr(g) => divisible_hull(&g).map_err(|_| {
            AbelianError::UnsupportedComparison(format!(
                "source {g} is not torsion and the target has no A_inf summand"
            ))
        })?,
    };
    let target = divisible_form(&target.normalize())?;
    Ok(compare(&source, &target))
}

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::finite::FiniteAbelian;
use super::primes::{is_prime, nth_prime, prime_factors, prime_index, valuation};
use super::AbelianError;

/// A symbolic countable abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupExpr {
    Zero,
    /// The integers.
    IntZ,
    /// The rationals.
    RatQ,
    /// `Z(n)`, `n >= 2`.
    Cyclic(u64),
    /// `Z(p^inf)`, `p` prime.
    Quasicyclic(u64),
    Sum(Vec<GroupExpr>),
    /// `base^{<w}`: direct sum of countably many copies.
    FinSup(Box<GroupExpr>),
    /// `(+)_p Z(p^inf)^{<w} (+) Q^{<w}`.
    AInfinity,
    /// `(+)_{i >= from} Z(p_i^inf)^{<w}` over the fixed prime enumeration.
    PrimeTail {
        from: usize,
    },
}

/// Cardinality of a countable set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cardinal {
    Fin(u128),
    CountablyInfinite,
}

impl Cardinal {
    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Fin(_))
    }

    pub fn checked_product(self, other: Cardinal) -> Option<Cardinal> {
        match (self, other) {
            (Cardinal::Fin(a), Cardinal::Fin(b)) => a.checked_mul(b).map(Cardinal::Fin),
            (Cardinal::Fin(0), _) | (_, Cardinal::Fin(0)) => Some(Cardinal::Fin(0)),
            _ => Some(Cardinal::CountablyInfinite),
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Fin(n) => write!(f, "{n}"),
            Cardinal::CountablyInfinite => write!(f, "aleph0"),
        }
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinal::Fin(n) => s.serialize_u128(*n),
            Cardinal::CountablyInfinite => s.serialize_str("aleph0"),
        }
    }
}

/// A set of primes of the form `finite ∪ { p_i : i >= from_index }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PrimeSet {
    finite: BTreeSet<u64>,
    from_index: Option<usize>,
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet::default()
    }

    pub fn all() -> Self {
        PrimeSet::from_index(0)
    }

    pub fn from_index(i: usize) -> Self {
        PrimeSet {
            finite: BTreeSet::new(),
            from_index: Some(i),
        }
    }

    pub fn single(p: u64) -> Self {
        let mut s = PrimeSet::empty();
        s.insert(p);
        s
    }

    pub fn insert(&mut self, p: u64) {
        if !self.contains(p) {
            self.finite.insert(p);
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        if self.finite.contains(&p) {
            return true;
        }
        match (self.from_index, prime_index(p)) {
            (Some(k), Some(i)) => i >= k,
            _ => false,
        }
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        let from_index = match (self.from_index, other.from_index) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = PrimeSet {
            finite: BTreeSet::new(),
            from_index,
        };
        for &p in self.finite.iter().chain(&other.finite) {
            out.insert(p);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.from_index.is_none()
    }

    pub fn is_all(&self) -> bool {
        self.from_index
            .is_some_and(|k| (0..k).all(|i| self.finite.contains(&nth_prime(i))))
    }

    pub fn is_finite(&self) -> bool {
        self.from_index.is_none()
    }

    /// The explicitly listed primes (all of them when the set is finite).
    pub fn finite_part(&self) -> &BTreeSet<u64> {
        &self.finite
    }

    pub fn cofinite_from(&self) -> Option<usize> {
        self.from_index
    }
}

impl Serialize for PrimeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cofinite<'a> {
            primes: &'a BTreeSet<u64>,
            all_from_index: usize,
        }
        if self.is_all() {
            return s.serialize_str("all");
        }
        match self.from_index {
            None => self.finite.serialize(s),
            Some(k) => Cofinite {
                primes: &self.finite,
                all_from_index: k,
            }
            .serialize(s),
        }
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all() {
            return write!(f, "all primes");
        }
        let listed: Vec<String> = self.finite.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", listed.join(","))?;
        if let Some(k) = self.from_index {
            write!(f, " + p_i for i >= {k}")?;
        }
        Ok(())
    }
}

/// The two ways a group can fail to be p-compact, across all primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadPrimes {
    pub nontorsion: bool,
    pub infinite_p_part: PrimeSet,
}

impl GroupExpr {
    pub fn cyclic(n: u64) -> Result<Self, AbelianError> {
        if n < 2 {
            return Err(AbelianError::InvalidModulus(n));
        }
        Ok(GroupExpr::Cyclic(n))
    }

    pub fn quasicyclic(p: u64) -> Result<Self, AbelianError> {
        if !is_prime(p) {
            return Err(AbelianError::NotPrime(p));
        }
        Ok(GroupExpr::Quasicyclic(p))
    }

    pub fn sum(parts: Vec<GroupExpr>) -> Result<Self, AbelianError> {
        if parts.is_empty() {
            return Err(AbelianError::EmptySum);
        }
        Ok(GroupExpr::Sum(parts))
    }

    pub fn fin_sup(base: GroupExpr) -> Self {
        GroupExpr::FinSup(Box::new(base))
    }

    /// Checks the constructor invariants recursively.
    pub fn validate(&self) -> Result<(), AbelianError> {
        match self {
            GroupExpr::Cyclic(n) if *n < 2 => Err(AbelianError::InvalidModulus(*n)),
            GroupExpr::Quasicyclic(p) if !is_prime(*p) => Err(AbelianError::NotPrime(*p)),
            GroupExpr::Sum(parts) if parts.is_empty() => Err(AbelianError::EmptySum),
            GroupExpr::Sum(parts) => parts.iter().try_for_each(GroupExpr::validate),
            GroupExpr::FinSup(b) => b.validate(),
            _ => Ok(()),
        }
    }

    /// Flattens nested sums, drops `Zero` parts, collapses one-part sums and
    /// `0^{<w}`.
    pub fn normalize(&self) -> GroupExpr {
        match self {
            GroupExpr::Sum(parts) => {
                let mut flat = Vec::new();
                for part in parts {
                    match part.normalize() {
                        GroupExpr::Zero => {}
                        GroupExpr::Sum(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                match flat.len() {
                    0 => GroupExpr::Zero,
                    1 => flat.pop().unwrap(),
                    _ => GroupExpr::Sum(flat),
                }
            }
            GroupExpr::FinSup(b) => match b.normalize() {
                GroupExpr::Zero => GroupExpr::Zero,
                nb => GroupExpr::FinSup(Box::new(nb)),
            },
            other => other.clone(),
        }
    }

    pub fn is_torsion(&self) -> bool {
        match self {
            GroupExpr::IntZ | GroupExpr::RatQ | GroupExpr::AInfinity => false,
            GroupExpr::Zero
            | GroupExpr::Cyclic(_)
            | GroupExpr::Quasicyclic(_)
            | GroupExpr::PrimeTail { .. } => true,
            GroupExpr::Sum(parts) => parts.iter().all(GroupExpr::is_torsion),
            GroupExpr::FinSup(b) => b.is_torsion(),
        }
    }

    /// Dimension of `G[p]` over `Z(p)`; `None` when infinite.
    pub fn p_rank(&self, p: u64) -> Option<u64> {
        match self {
            GroupExpr::Zero | GroupExpr::IntZ | GroupExpr::RatQ => Some(0),
            GroupExpr::Cyclic(n) => Some(u64::from(n % p == 0)),
            GroupExpr::Quasicyclic(q) => Some(u64::from(*q == p)),
            GroupExpr::Sum(parts) => parts
                .iter()
                .try_fold(0u64, |acc, g| g.p_rank(p).map(|r| acc + r)),
            GroupExpr::FinSup(b) => match b.p_rank(p) {
                Some(0) => Some(0),
                _ => None,
            },
            GroupExpr::AInfinity => None,
            GroupExpr::PrimeTail { from } => match prime_index(p) {
                Some(i) if i >= *from => None,
                _ => Some(0),
            },
        }
    }

    /// `|G[p]|`, the number of elements killed by `p`.
    pub fn order_p_count(&self, p: u64) -> Result<Cardinal, AbelianError> {
        match self.p_rank(p) {
            None => Ok(Cardinal::CountablyInfinite),
            Some(r) => {
                let r = u32::try_from(r).map_err(|_| AbelianError::CountOverflow)?;
                (p as u128)
                    .checked_pow(r)
                    .map(Cardinal::Fin)
                    .ok_or(AbelianError::CountOverflow)
            }
        }
    }

    /// Torsion with finite `G[p]`.
    pub fn is_p_compact(&self, p: u64) -> bool {
        self.is_torsion() && self.p_rank(p).is_some()
    }

    /// Primes `p` for which `G[p]` is nontrivial.
    pub fn support_primes(&self) -> PrimeSet {
        match self {
            GroupExpr::Zero | GroupExpr::IntZ | GroupExpr::RatQ => PrimeSet::empty(),
            GroupExpr::Cyclic(n) => {
                let mut s = PrimeSet::empty();
                for p in prime_factors(*n) {
                    s.insert(p);
                }
                s
            }
            GroupExpr::Quasicyclic(p) => PrimeSet::single(*p),
            GroupExpr::Sum(parts) => parts
                .iter()
                .fold(PrimeSet::empty(), |acc, g| acc.union(&g.support_primes())),
            GroupExpr::FinSup(b) => b.support_primes(),
            GroupExpr::AInfinity => PrimeSet::all(),
            GroupExpr::PrimeTail { from } => PrimeSet::from_index(*from),
        }
    }

    /// Primes `p` for which `G[p]` is infinite.
    pub fn infinite_p_part(&self) -> PrimeSet {
        match self {
            GroupExpr::Sum(parts) => parts
                .iter()
                .fold(PrimeSet::empty(), |acc, g| acc.union(&g.infinite_p_part())),
            GroupExpr::FinSup(b) => b.support_primes(),
            GroupExpr::AInfinity => PrimeSet::all(),
            GroupExpr::PrimeTail { from } => PrimeSet::from_index(*from),
            _ => PrimeSet::empty(),
        }
    }

    pub fn bad_primes(&self) -> BadPrimes {
        BadPrimes {
            nontorsion: !self.is_torsion(),
            infinite_p_part: self.infinite_p_part(),
        }
    }

    /// The p-component `{ g : p^k g = 0 for some k }`, normalized.
    pub fn p_component(&self, p: u64) -> Result<GroupExpr, AbelianError> {
        if !self.is_torsion() {
            return Err(AbelianError::NonTorsionInput);
        }
        if !is_prime(p) {
            return Err(AbelianError::NotPrime(p));
        }
        Ok(self.p_component_unchecked(p).normalize())
    }

    fn p_component_unchecked(&self, p: u64) -> GroupExpr {
        match self {
            GroupExpr::Cyclic(n) => match valuation(*n, p) {
                0 => GroupExpr::Zero,
                v => GroupExpr::Cyclic(p.pow(v)),
            },
            GroupExpr::Quasicyclic(q) if *q == p => GroupExpr::Quasicyclic(p),
            GroupExpr::Sum(parts) => {
                GroupExpr::Sum(parts.iter().map(|g| g.p_component_unchecked(p)).collect())
            }
            GroupExpr::FinSup(b) => GroupExpr::FinSup(Box::new(b.p_component_unchecked(p))),
            GroupExpr::PrimeTail { from } => match prime_index(p) {
                Some(i) if i >= *from => GroupExpr::fin_sup(GroupExpr::Quasicyclic(p)),
                _ => GroupExpr::Zero,
            },
            _ => GroupExpr::Zero,
        }
    }

    /// Group order when finite.
    pub fn finite_order(&self) -> Option<u128> {
        match self.normalize() {
            GroupExpr::Zero => Some(1),
            GroupExpr::Cyclic(n) => Some(n as u128),
            GroupExpr::Sum(parts) => parts.iter().try_fold(1u128, |acc, g| {
                g.finite_order().and_then(|o| acc.checked_mul(o))
            }),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite_order().is_some()
    }

    /// Explicit cyclic decomposition of a finite expression, left to right.
    pub fn concretize(&self, cap: u64) -> Result<FiniteAbelian, AbelianError> {
        let order = self.finite_order().ok_or(AbelianError::InfiniteGroup)?;
        if order > cap as u128 {
            return Err(AbelianError::CapExceeded { order, cap });
        }
        fn collect(g: &GroupExpr, out: &mut Vec<u64>) {
            match g {
                GroupExpr::Cyclic(n) => out.push(*n),
                GroupExpr::Sum(parts) => parts.iter().for_each(|g| collect(g, out)),
                _ => {}
            }
        }
        let mut orders = Vec::new();
        collect(&self.normalize(), &mut orders);
        FiniteAbelian::new(orders)
    }

    /// True when `AInfinity` is the group or one of its top-level summands.
    pub fn has_a_infinity_summand(&self) -> bool {
        match self.normalize() {
            GroupExpr::AInfinity => true,
            GroupExpr::Sum(parts) => parts.contains(&GroupExpr::AInfinity),
            _ => false,
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Zero => write!(f, "0"),
            GroupExpr::IntZ => write!(f, "Z"),
            GroupExpr::RatQ => write!(f, "Q"),
            GroupExpr::Cyclic(n) => write!(f, "Z({n})"),
            GroupExpr::Quasicyclic(p) => write!(f, "Zq({p})"),
            GroupExpr::Sum(parts) => {
                write!(f, "sum(")?;
                for (i, g) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
            GroupExpr::FinSup(b) => write!(f, "finsup({b})"),
            GroupExpr::AInfinity => write!(f, "Ainf"),
            GroupExpr::PrimeTail { from } => write!(f, "Ptail({from})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AbelianError> {
        Err(AbelianError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> Result<(), AbelianError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<u64, AbelianError> {
        let start = self.pos;
        let w = self.word();
        match w.parse::<u64>() {
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos = start;
                self.err("expected a natural number")
            }
        }
    }

    fn peek(&mut self, c: char) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(c)
    }

    fn expr(&mut self) -> Result<GroupExpr, AbelianError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let w = self.word();
        let at = |e: AbelianError| match e {
            AbelianError::Parse { .. } => e,
            other => AbelianError::Parse {
                pos: start,
                msg: other.to_string(),
            },
        };
        match w {
            "0" => Ok(GroupExpr::Zero),
            "Q" => Ok(GroupExpr::RatQ),
            "Ainf" => Ok(GroupExpr::AInfinity),
            "Z" if !self.peek('(') => Ok(GroupExpr::IntZ),
            "Z" | "Zq" | "Ptail" => {
                self.eat('(')?;
                let n = self.number()?;
                self.eat(')')?;
                match w {
                    "Z" => GroupExpr::cyclic(n).map_err(at),
                    "Zq" => GroupExpr::quasicyclic(n).map_err(at),
                    _ => Ok(GroupExpr::PrimeTail { from: n as usize }),
                }
            }
            "sum" => {
                self.eat('(')?;
                let mut parts = vec![self.expr()?];
                while self.peek(',') {
                    self.eat(',')?;
                    parts.push(self.expr()?);
                }
                self.eat(')')?;
                Ok(GroupExpr::Sum(parts))
            }
            "finsup" => {
                self.eat('(')?;
                let b = self.expr()?;
                self.eat(')')?;
                Ok(GroupExpr::fin_sup(b))
            }
            "" => {
                self.pos = start;
                self.err("expected a group expression")
            }
            other => {
                self.pos = start;
                self.err(format!("unknown group symbol '{other}'"))
            }
        }
    }
}

impl FromStr for GroupExpr {
    type Err = AbelianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let g = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return p.err("trailing input");
        }
        Ok(g)
    }
}

impl Serialize for GroupExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupExpr::*;

    fn g(s: &str) -> GroupExpr {
        s.parse().unwrap()
    }

    #[test]
    fn torsion_predicate() {
        assert!(!IntZ.is_torsion());
        assert!(Quasicyclic(3).is_torsion());
        assert!(g("sum(Z(4),finsup(Z(2)))").is_torsion());
        assert!(!AInfinity.is_torsion());
        assert!(Zero.is_torsion());
        assert!(!g("finsup(Q)").is_torsion());
    }

    #[test]
    fn order_p_counts() {
        assert_eq!(Cyclic(12).order_p_count(2).unwrap(), Cardinal::Fin(2));
        assert_eq!(Quasicyclic(2).order_p_count(2).unwrap(), Cardinal::Fin(2));
        assert_eq!(
            g("finsup(Z(3))").order_p_count(3).unwrap(),
            Cardinal::CountablyInfinite
        );
        assert_eq!(RatQ.order_p_count(5).unwrap(), Cardinal::Fin(1));
        assert_eq!(
            g("sum(Z(2),Z(6),Zq(2))").order_p_count(2).unwrap(),
            Cardinal::Fin(8)
        );
        assert_eq!(
            AInfinity.order_p_count(7).unwrap(),
            Cardinal::CountablyInfinite
        );
        assert_eq!(
            g("finsup(Z(3))").order_p_count(2).unwrap(),
            Cardinal::Fin(1)
        );
    }

    #[test]
    fn p_compactness() {
        assert!(!IntZ.is_p_compact(2));
        assert!(!g("finsup(Z(2))").is_p_compact(2));
        assert!(g("finsup(Z(2))").is_p_compact(3));
        assert!(g("sum(Zq(2),Zq(3))").is_p_compact(2));
        assert!(Cyclic(8).is_p_compact(2));
        assert!(!AInfinity.is_p_compact(5));
        assert!(g("Ptail(2)").is_p_compact(3));
        assert!(!g("Ptail(2)").is_p_compact(5));
    }

    #[test]
    fn bad_prime_sets() {
        let q7 = Quasicyclic(7).bad_primes();
        assert!(!q7.nontorsion && q7.infinite_p_part.is_empty());

        let b = g("sum(Z,finsup(Z(5)))").bad_primes();
        assert!(b.nontorsion);
        assert_eq!(b.infinite_p_part, PrimeSet::single(5));
        for p in [2, 3, 5, 7] {
            let compact = g("sum(Z,finsup(Z(5)))").is_p_compact(p);
            assert_eq!(compact, !b.nontorsion && !b.infinite_p_part.contains(p));
        }

        let a = AInfinity.bad_primes();
        assert!(a.nontorsion && a.infinite_p_part.is_all());
        assert_eq!(
            serde_json::to_string(&a.infinite_p_part).unwrap(),
            "\"all\""
        );
    }

    #[test]
    fn p_components() {
        assert_eq!(Cyclic(12).p_component(2).unwrap(), Cyclic(4));
        assert_eq!(g("sum(Zq(2),Z(9))").p_component(3).unwrap(), Cyclic(9));
        let c = g("finsup(Z(6))").p_component(3).unwrap();
        assert_eq!(c, g("finsup(Z(3))"));
        assert_eq!(
            c.order_p_count(3).unwrap(),
            g("finsup(Z(6))").order_p_count(3).unwrap()
        );
        assert_eq!(Cyclic(9).p_component(2).unwrap(), Zero);
        assert_eq!(IntZ.p_component(2), Err(AbelianError::NonTorsionInput));
    }

    #[test]
    fn concretize_finite() {
        assert_eq!(
            g("sum(Z(2),Z(4))").concretize(1000).unwrap().orders(),
            &[2, 4]
        );
        assert!(Zero.concretize(1000).unwrap().orders().is_empty());
        assert_eq!(
            Quasicyclic(2).concretize(1000),
            Err(AbelianError::InfiniteGroup)
        );
        assert!(matches!(
            g("sum(Z(100),Z(100))").concretize(1000),
            Err(AbelianError::CapExceeded { .. })
        ));
        assert_eq!(
            g("sum(0,sum(Z(3),finsup(0)))")
                .concretize(1000)
                .unwrap()
                .orders(),
            &[3]
        );
    }

    #[test]
    fn normalization() {
        assert_eq!(
            g("sum(0,sum(Z(2),Zq(3)),0)").normalize(),
            g("sum(Z(2),Zq(3))")
        );
        assert_eq!(g("sum(0,0)").normalize(), Zero);
        assert_eq!(g("finsup(sum(0))").normalize(), Zero);
    }

    #[test]
    fn parse_errors_are_positioned() {
        match "sum(Z(2),Zq(4))".parse::<GroupExpr>() {
            Err(AbelianError::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            "Z(1)".parse::<GroupExpr>(),
            Err(AbelianError::Parse { .. })
        ));
        assert!(matches!(
            "sum()".parse::<GroupExpr>(),
            Err(AbelianError::Parse { .. })
        ));
        assert!(matches!(
            "Z x".parse::<GroupExpr>(),
            Err(AbelianError::Parse { pos: 2, .. })
        ));
    }

    #[test]
    fn text_round_trip_examples() {
        for s in [
            "0",
            "Z",
            "Q",
            "Z(8)",
            "Zq(3)",
            "sum(Z(2),finsup(Zq(5)),Q)",
            "Ainf",
            "Ptail(3)",
        ] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g(" sum( Z(2) , Z ) ").to_string(), "sum(Z(2),Z)");
    }
}

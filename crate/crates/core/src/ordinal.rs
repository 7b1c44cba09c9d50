//! Ordinals below `w^w` in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const DEFAULT_EXPONENT_CAP: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("exponents must be strictly decreasing with positive coefficients")]
    NotCanonical,
    #[error("exponent {exponent} exceeds cap {cap}")]
    ExponentCap { exponent: u32, cap: u32 },
    #[error("coefficient overflow")]
    Overflow,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// `sum_i w^{e_i} * c_i` with strictly decreasing `e_i` and `c_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(0, n)],
            }
        }
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(1, 1)],
        }
    }

    /// `w * n`.
    pub fn omega_times(n: u64) -> Self {
        Ordinal::omega().nat_mul(n)
    }

    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, OrdinalError> {
        let decreasing = terms.windows(2).all(|w| w[0].0 > w[1].0);
        if !decreasing || terms.iter().any(|&(_, c)| c == 0) {
            return Err(OrdinalError::NotCanonical);
        }
        Ok(Ordinal { terms })
    }

    /// Like [`Ordinal::from_terms`], additionally rejecting exponents above `cap`.
    pub fn from_terms_capped(terms: Vec<(u32, u64)>, cap: u32) -> Result<Self, OrdinalError> {
        let o = Ordinal::from_terms(terms)?;
        o.check_cap(cap)?;
        Ok(o)
    }

    pub fn check_cap(&self, cap: u32) -> Result<(), OrdinalError> {
        match self.terms.first() {
            Some(&(e, _)) if e > cap => Err(OrdinalError::ExponentCap { exponent: e, cap }),
            _ => Ok(()),
        }
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e == 0)
    }

    /// The natural number this ordinal equals, if finite.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e > 0)
    }

    /// Ordinal sum `self + other`; terms of `self` below the leading exponent
    /// of `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(&(lead, lead_coeff)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self
            .terms
            .iter()
            .copied()
            .take_while(|&(e, _)| e >= lead)
            .collect();
        match terms.last_mut() {
            Some(last) if last.0 == lead => {
                last.1 = last.1.saturating_add(lead_coeff);
                terms.extend_from_slice(&other.terms[1..]);
            }
            _ => terms.extend_from_slice(&other.terms),
        }
        Ordinal { terms }
    }

    /// Right multiplication by a natural number, `self * n`.
    pub fn nat_mul(&self, n: u64) -> Ordinal {
        if n == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].1 = terms[0].1.saturating_mul(n);
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::finite(1))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let err = |pos: usize, msg: &str| OrdinalError::Parse {
            pos,
            msg: msg.to_string(),
        };
        let number = |pos: &mut usize| -> Result<u64, OrdinalError> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            s[start..*pos]
                .parse()
                .map_err(|_| err(start, "expected a natural number"))
        };
        let s_trim = s.trim();
        if s_trim == "0" {
            return Ok(Ordinal::zero());
        }
        let mut terms = Vec::new();
        loop {
            while pos < bytes.len() && bytes[pos] == b' ' {
                pos += 1;
            }
            let term = if pos < bytes.len() && bytes[pos] == b'w' {
                pos += 1;
                let mut e = 1u32;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let at = pos;
                    e = u32::try_from(number(&mut pos)?)
                        .map_err(|_| err(at, "exponent too large"))?;
                }
                let mut c = 1u64;
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                    c = number(&mut pos)?;
                }
                (e, c)
            } else {
                (0, number(&mut pos)?)
            };
            terms.push(term);
            while pos < bytes.len() && bytes[pos] == b' ' {
                pos += 1;
            }
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'+' {
                return Err(err(pos, "expected '+'"));
            }
            pos += 1;
        }
        Ordinal::from_terms(terms).map_err(|_| err(0, "terms are not in Cantor normal form"))
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

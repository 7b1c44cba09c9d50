//! Symbolic Borel complexity classes built from `E0` by countable powers
//! (`^w`), jumps (`^+`) and products with `id(w)`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::ClassifyError;

/// The chain `E0 < E0^w < (E0^w)^+ < (E0^w)^++ < (E0^w)^+++`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComplexityClass {
    E0,
    E0Omega,
    /// `(E0^w)` followed by `k` jumps, `1 <= k <= 3`.
    E0OmegaPlus(u8),
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexityClass::E0 => write!(f, "E0"),
            ComplexityClass::E0Omega => write!(f, "E0^w"),
            ComplexityClass::E0OmegaPlus(k) => write!(f, "(E0^w)^{}", "+".repeat(*k as usize)),
        }
    }
}

impl Serialize for ComplexityClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An unsimplified class expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassExpr {
    E0,
    /// `E^w`
    Omega(Box<ClassExpr>),
    /// `E^+`
    Plus(Box<ClassExpr>),
    /// `id(w) x E`
    IdOmegaTimes(Box<ClassExpr>),
}

impl ClassExpr {
    pub fn omega(self) -> Self {
        ClassExpr::Omega(Box::new(self))
    }

    pub fn plus(self) -> Self {
        ClassExpr::Plus(Box::new(self))
    }

    pub fn id_omega_times(self) -> Self {
        ClassExpr::IdOmegaTimes(Box::new(self))
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrapped(e: &ClassExpr) -> String {
            match e {
                ClassExpr::E0 => "E0".into(),
                other => format!("({other})"),
            }
        }
        match self {
            ClassExpr::E0 => write!(f, "E0"),
            ClassExpr::Omega(e) => write!(f, "{}^w", wrapped(e)),
            ClassExpr::Plus(e) => write!(f, "{}^+", wrapped(e)),
            ClassExpr::IdOmegaTimes(e) => write!(f, "id(w)x{}", wrapped(e)),
        }
    }
}

impl FromStr for ClassExpr {
    type Err = ClassifyError;

    /// Accepts `E0`, postfix `^w` and `^+` (repeated pluses allowed, as in
    /// `^++`), parentheses and the prefix `id(w)x`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let e = parse_expr(&compact, &mut pos)?;
        if pos != compact.len() {
            return Err(unsupported(pos, "trailing input"));
        }
        Ok(e)
    }
}

fn unsupported(pos: usize, msg: &str) -> ClassifyError {
    ClassifyError::UnsupportedExpression(format!("at character {pos}: {msg}"))
}

fn eat(s: &[char], pos: &mut usize, lit: &str) -> bool {
    let lit: Vec<char> = lit.chars().collect();
    if s[*pos..].starts_with(&lit) {
        *pos += lit.len();
        true
    } else {
        false
    }
}

fn parse_expr(s: &[char], pos: &mut usize) -> Result<ClassExpr, ClassifyError> {
    if eat(s, pos, "id(w)x") {
        return Ok(parse_expr(s, pos)?.id_omega_times());
    }
    let mut e = if eat(s, pos, "E0") {
        ClassExpr::E0
    } else if eat(s, pos, "(") {
        let inner = parse_expr(s, pos)?;
        if !eat(s, pos, ")") {
            return Err(unsupported(*pos, "expected ')'"));
        }
        inner
    } else {
        return Err(unsupported(*pos, "expected E0, '(' or id(w)x"));
    };
    while eat(s, pos, "^") {
        if eat(s, pos, "w") {
            e = e.omega();
        } else if s.get(*pos) == Some(&'+') {
            while eat(s, pos, "+") {
                e = e.plus();
            }
        } else {
            return Err(unsupported(*pos, "expected 'w' or '+' after '^'"));
        }
    }
    Ok(e)
}

/// Normalizes a class expression into the chain using `(E^w)^w = E^w`,
/// `(E^+)^w <= E^+` and `id(w) x E <= E`, the last two for `E >= E0^w`,
/// where `id(w) x E <= E` holds.
pub fn complexity_simplify(e: &ClassExpr) -> Result<ComplexityClass, ClassifyError> {
    use ComplexityClass::*;
    let refuse = |m: String| Err(ClassifyError::UnsupportedExpression(m));
    match e {
        ClassExpr::E0 => Ok(E0),
        ClassExpr::Omega(inner) => Ok(match complexity_simplify(inner)? {
            E0 | E0Omega => E0Omega,
            plus => plus,
        }),
        ClassExpr::Plus(inner) => match complexity_simplify(inner)? {
            E0 => refuse(format!(
                "{e}: the jump of E0 is outside the supported chain"
            )),
            E0Omega => Ok(E0OmegaPlus(1)),
            E0OmegaPlus(k) if k < 3 => Ok(E0OmegaPlus(k + 1)),
            E0OmegaPlus(_) => refuse(format!("{e}: more than three jumps")),
        },
        ClassExpr::IdOmegaTimes(inner) => match complexity_simplify(inner)? {
            E0 => refuse(format!(
                "{e}: id(w) x E0 is outside the supported rewrite rules"
            )),
            c => Ok(c),
        },
    }
}

//! Symbolic countable abelian groups and explicit finite abelian groups.
//!
//! [`GroupExpr`] covers the groups that occur as factors and filtration
//! quotients: `Z`, `Q`, cyclic, quasicyclic, finite direct sums, countable
//! direct powers `A^{<w}`, the universal countable group `A_inf`, and the
//! prime-indexed tails `(+)_{i >= k} Z(p_i^inf)^{<w}`. Torsion, `|G[p]|` and
//! p-compactness are decided compositionally.

mod expr;
mod finite;
mod hull;
pub mod primes;

pub use expr::{BadPrimes, Cardinal, GroupExpr, PrimeSet};
pub use finite::{FiniteAbelian, GroupElement};
pub use hull::{
    divisible_hull, embeds, DivNormalForm, EmbedCertificate, EmbedSource, Multiplicity,
    PrimeComparison, TailComparison,
};

use thiserror::Error;

/// Default bound on the order of a concretized group.
pub const DEFAULT_ORDER_CAP: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("cyclic modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("sum must have at least one part")]
    EmptySum,
    #[error("operation requires a torsion group")]
    NonTorsionInput,
    #[error("unsupported comparison: {0}")]
    UnsupportedComparison(String),
    #[error("group is infinite")]
    InfiniteGroup,
    #[error("group order {order} exceeds cap {cap}")]
    CapExceeded { order: u128, cap: u64 },
    #[error("group order overflows u64")]
    OrderOverflow,
    #[error("shape mismatch: expected {expected} coordinates, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("residue {residue} at coordinate {coordinate} is not below {order}")]
    ResidueOutOfRange {
        coordinate: usize,
        residue: u64,
        order: u64,
    },
    #[error("count of elements of order dividing p overflows")]
    CountOverflow,
}

//! Countable abelian group calculus, finite-depth coset trees and tameness
//! classification for non-archimedean abelian Polish groups.
//!
//! Groups are symbolic ([`abelian::GroupExpr`]); trees live over explicit
//! finite levels ([`trees::LevelTree`]); [`classify`] decides tameness of
//! eventually periodic products and filtrations, and [`universal`] plans
//! embeddings into the universal tame product.

pub mod abelian;
pub mod classify;
pub mod cli;
pub mod ordinal;
pub mod trees;
pub mod universal;
pub mod witness;

use thiserror::Error;

/// Tag carried by every JSON document this crate reads or writes.
pub const FORMAT_TAG: &str = "cosettree/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Abelian(#[from] abelian::AbelianError),
    #[error(transparent)]
    Ordinal(#[from] ordinal::OrdinalError),
    #[error(transparent)]
    Tree(#[from] trees::TreeError),
    #[error(transparent)]
    Witness(#[from] witness::WitnessError),
    #[error(transparent)]
    Classify(#[from] classify::ClassifyError),
    #[error(transparent)]
    Plan(#[from] universal::PlanError),
}

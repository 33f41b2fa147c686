//! Structural errors.
//!
//! Structural errors (ids that do not resolve, missing table entries,
//! violated preconditions) are kept apart from axiom violations: the former
//! abort a computation, the latter are collected into a
//! [`crate::report::ValidationReport`].

use crate::ids::{MorId, ObjId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown object id `{0}`")]
    UnknownObject(ObjId),

    #[error("unknown morphism id `{0}`")]
    UnknownMorphism(MorId),

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("morphisms `{second}` and `{first}` are not composable (cod(first) != dom(second))")]
    NotComposable { second: MorId, first: MorId },

    #[error("missing table entry: {0}")]
    MissingEntry(String),

    #[error("empty morphism chain")]
    EmptyChain,

    #[error("nerve dimension {k} exceeds cap {cap}")]
    NerveCapExceeded { k: usize, cap: usize },

    #[error("rejected input: {0}")]
    Rejected(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

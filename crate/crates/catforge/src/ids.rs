//! Object and morphism identifiers.
//!
//! Identifiers are opaque, case-sensitive strings. Equality of structure is
//! everywhere identifier equality, so every axiom in this crate is decidable
//! by table lookup and enumeration.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Identifier of an object in a finite category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjId(pub String);

/// Identifier of a morphism in a finite category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorId(pub String);

impl ObjId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl MorId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ObjId {
    fn from(s: &str) -> Self {
        ObjId(s.to_string())
    }
}

impl From<String> for ObjId {
    fn from(s: String) -> Self {
        ObjId(s)
    }
}

impl From<&str> for MorId {
    fn from(s: &str) -> Self {
        MorId(s.to_string())
    }
}

impl From<String> for MorId {
    fn from(s: String) -> Self {
        MorId(s)
    }
}

/// Shorthand constructor for object ids.
pub fn obj(s: impl Into<ObjId>) -> ObjId {
    s.into()
}

/// Shorthand constructor for morphism ids.
pub fn mor(s: impl Into<MorId>) -> MorId {
    s.into()
}

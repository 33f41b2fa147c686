//! catforge: finite category machinery with exhaustive coherence checking.
//!
//! The crate provides executable, fully enumerated models of finite
//! categories and the structures layered on them — permutative and
//! bipermutative structures, fibered categories with chosen pullbacks and
//! the Grothendieck correspondence, a strictification pipeline, the wreath
//! product of a base groupoid with the injection category, truncated
//! multicategories with the functor-multicategory construction, and
//! Grayson–Quillen group completion with K₀ extraction.
//!
//! Every structure is a set of lookup tables, every law is checked by
//! enumeration, and every checker reports all violated instances.

pub mod corpus;
pub mod error;
pub mod fibration;
pub mod fincat;
pub mod groupcomp;
pub mod ids;
pub mod monostruct;
pub mod multicat;
pub mod perm;
pub mod rebracket;
pub mod report;
pub mod strictifier;
pub mod window;
pub mod wreath;

pub use error::{Error, Result};
pub use report::{ValidationReport, Violation};

/// Temporary stub; replaced by the real CLI module.
pub fn cli_main() -> i32 {
    eprintln!("catforge: CLI not wired up yet");
    2
}

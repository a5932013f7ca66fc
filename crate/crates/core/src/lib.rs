//! Geodesics, geodesic growth and blind counter machines for virtually
//! abelian groups given by integer tables.
//!
//! Start with [`GroupSpec::parse`], shuffle words with
//! [`shuffle::AlphabetYP`], test them with [`geodesic::PatternCriterion`],
//! and count them with [`growth::geodesic_counts`]. The guide in `book/`
//! walks through each step.

pub mod counter;
pub mod error;
pub mod geodesic;
pub mod group;
pub mod growth;
pub mod machine;
pub mod path;
pub mod polyhedra;
pub mod shuffle;

pub use error::{Error, Result};
pub use group::{Coset, Element, Gen, Generator, GroupSpec, IntMatrix, Word};

// Compiles and runs every snippet of the guide as a doctest.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/shuffling.md")]
    mod shuffling {}
    #[doc = include_str!("../../../book/src/geodesics.md")]
    mod geodesics {}
    #[doc = include_str!("../../../book/src/polyhedra.md")]
    mod polyhedra {}
    #[doc = include_str!("../../../book/src/paths.md")]
    mod paths {}
    #[doc = include_str!("../../../book/src/machines.md")]
    mod machines {}
    #[doc = include_str!("../../../book/src/growth.md")]
    mod growth {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

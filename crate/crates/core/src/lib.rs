//! Finite machinery around a forcing poset for sets with many non-disjoint
//! translations in the Cantor group `ω2`.
//!
//! * [`gf2`]: words over GF(2), lex order, elimination.
//! * [`arrange`]: pair colorings of `ˡ2` and 4-arrangement extraction.
//! * [`indep`]: translations between subsets of an independent set.
//! * [`poset`]: conditions, validation, order, extension, amalgamation.
//! * [`chainlab`]: chains of conditions and their generic approximations.
//! * [`format`]: the canonical JSON form of all of the above.
//! * [`instances`]: seeded random inputs.

pub mod arrange;
pub mod chainlab;
pub mod error;
pub mod format;
pub mod gf2;
pub mod indep;
pub mod instances;
pub mod poset;

pub use error::{Error, Result, Trace};
pub use gf2::Word;
pub use poset::{Condition, Label, LabelPair};

//! Paraconsistent and plausible consequence relations defined by pivots over
//! classical, four-valued and three-valued propositional semantics, together
//! with exhaustive checkers for their characterizations on small structures.

pub mod bitset;
pub mod characterize;
pub mod choice;
pub mod consequence;
pub mod error;
pub mod formula;
pub mod semantics;

pub use bitset::{BitSet, ValuationSet};
pub use error::{Error, Result};
pub use formula::{AtomSet, Formula};

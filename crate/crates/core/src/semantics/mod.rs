//! Semantic structures, the formula quotient, definable sets and the
//! structural assumptions.

mod assumptions;
mod clone;
mod quotient;
mod structure;
mod truth;

pub use assumptions::{
    check_assumptions, Assumption, AssumptionReport, Counterexample, ModLaw, Status,
};
pub use clone::{ClassSet, FormulaClone, DEFAULT_CLONE_CAP};
pub use quotient::{DefinableFamily, Quotient};
pub use structure::{
    SemanticFunction, Structure, StructureKind, Valuation, DEFAULT_UNIVERSE_CAP,
};
pub use truth::TruthValue;

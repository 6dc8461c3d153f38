//! Checkers for the characterizations of pivotal consequence relations.

pub mod conditions;
pub mod properties;
pub mod relation;
pub mod verify;

pub use conditions::{check_condition, first_failure, recheck, Condition, ConditionReport, Violation};
pub use properties::verify_properties;
pub use relation::{Premise, RelationUnderTest};
pub use verify::{
    run, verify_pivot_representation, verify_rep_disc, verify_rep_disc_dp, verify_rep_dp, verify_rep_general,
    verify_xlogic, Coverage, Failure, Proposition, VerifyOptions, VerifyReport, VerifyRun,
};

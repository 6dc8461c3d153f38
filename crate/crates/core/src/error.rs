use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),

    #[error("`{0}` is not a valid atom name")]
    InvalidAtomName(String),

    #[error("valuation universe has {size} elements, above the cap of {cap}")]
    UniverseTooLarge { size: u128, cap: u64 },

    #[error("clone enumeration stopped after {classes} classes (cap {cap}); the formula quotient is incomplete")]
    IncompleteClone { classes: usize, cap: usize },

    #[error("image of domain element #{0} is not a subset of it")]
    NotAChoiceFunction(usize),

    #[error("domain and image lengths differ ({domain} vs {image})")]
    ShapeMismatch { domain: usize, image: usize },

    #[error("the universe is not an element of the domain")]
    UniverseNotInDomain,

    #[error("unknown condition `{0}`")]
    UnknownCondition(String),

    #[error("invalid valuation literal: {0}")]
    Valuation(String),

    #[error("invalid pivot description: {0}")]
    Pivot(String),

    #[error("{what} exceeds the enumeration cap ({limit})")]
    CapExceeded { what: String, limit: u64 },

    #[error("assumption {assumption} is not satisfied by this structure")]
    AssumptionViolated { assumption: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

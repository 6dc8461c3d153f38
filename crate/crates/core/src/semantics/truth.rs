use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

/// A truth value as a subset of the classical values {0, 1}:
/// `False` = {0}, `True` = {1}, `Both` = {0, 1}, `Neither` = {}.
///
/// Declaration order is the canonical value order used for enumeration.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TruthValue {
    False,
    True,
    Both,
    Neither,
}

impl TruthValue {
    pub const ALL: [TruthValue; 4] = [
        TruthValue::False,
        TruthValue::True,
        TruthValue::Both,
        TruthValue::Neither,
    ];

    pub fn from_parts(has_one: bool, has_zero: bool) -> TruthValue {
        match (has_one, has_zero) {
            (false, true) => TruthValue::False,
            (true, false) => TruthValue::True,
            (true, true) => TruthValue::Both,
            (false, false) => TruthValue::Neither,
        }
    }

    /// 1 ∈ v; this is the satisfaction condition in every structure.
    pub fn has_one(self) -> bool {
        matches!(self, TruthValue::True | TruthValue::Both)
    }

    /// 0 ∈ v.
    pub fn has_zero(self) -> bool {
        matches!(self, TruthValue::False | TruthValue::Both)
    }

    pub fn not(self) -> TruthValue {
        TruthValue::from_parts(self.has_zero(), self.has_one())
    }

    pub fn or(self, rhs: TruthValue) -> TruthValue {
        TruthValue::from_parts(
            self.has_one() || rhs.has_one(),
            self.has_zero() && rhs.has_zero(),
        )
    }

    pub fn and(self, rhs: TruthValue) -> TruthValue {
        TruthValue::from_parts(
            self.has_one() && rhs.has_one(),
            self.has_zero() || rhs.has_zero(),
        )
    }

    /// Literal symbol: `f`, `t`, `B` (both), `N` (neither).
    pub fn symbol(self) -> &'static str {
        match self {
            TruthValue::False => "f",
            TruthValue::True => "t",
            TruthValue::Both => "B",
            TruthValue::Neither => "N",
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for TruthValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f" => Ok(TruthValue::False),
            "t" => Ok(TruthValue::True),
            "B" => Ok(TruthValue::Both),
            "N" => Ok(TruthValue::Neither),
            other => Err(Error::Valuation(format!(
                "unknown truth value `{other}` (expected f, t, B or N)"
            ))),
        }
    }
}

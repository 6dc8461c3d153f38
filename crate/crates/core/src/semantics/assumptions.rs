//! Checks of the structural assumptions the representation results rely on.

use std::fmt;

use serde::Serialize;

use crate::bitset::ValuationSet;
use crate::error::Result;
use crate::formula::Formula;

use super::clone::FormulaClone;
use super::quotient::{DefinableFamily, Quotient};
use super::structure::Structure;
use super::truth::TruthValue;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Assumption {
    /// Mod of the set of all formulas is empty.
    A0,
    /// The valuation universe is finite.
    A1,
    /// If neither α nor ¬α is in Th(Mod Γ), then Mod(Γ) ∩ Mod(α) ⊄ Mod(¬α).
    A2,
    /// Disjunction, conjunction, double negation and De Morgan behave classically on Mod.
    A3,
    /// Mod(α ∨ β) = Mod(α) ∪ Mod(β).
    A4,
}

impl Assumption {
    pub const ALL: [Assumption; 5] = [
        Assumption::A0,
        Assumption::A1,
        Assumption::A2,
        Assumption::A3,
        Assumption::A4,
    ];
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self:?})")
    }
}

/// A law on Mod that can fail for a pair of formulas.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ModLaw {
    Disjunction,
    Conjunction,
    DoubleNegation,
    NegatedDisjunction,
    NegatedConjunction,
}

impl ModLaw {
    pub const ALL: [ModLaw; 5] = [
        ModLaw::Disjunction,
        ModLaw::Conjunction,
        ModLaw::DoubleNegation,
        ModLaw::NegatedDisjunction,
        ModLaw::NegatedConjunction,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            ModLaw::Disjunction => "Mod(a | b) = Mod(a) u Mod(b)",
            ModLaw::Conjunction => "Mod(a & b) = Mod(a) n Mod(b)",
            ModLaw::DoubleNegation => "Mod(~~a) = Mod(a)",
            ModLaw::NegatedDisjunction => "Mod(~(a | b)) = Mod(~a & ~b)",
            ModLaw::NegatedConjunction => "Mod(~(a & b)) = Mod(~a | ~b)",
        }
    }

    /// Whether the law holds pointwise for one pair of values.
    ///
    /// The compound side is computed by the connective tables; the other side
    /// combines satisfaction of the parts set-theoretically.
    pub fn holds_at(self, a: TruthValue, b: TruthValue) -> bool {
        match self {
            ModLaw::Disjunction => a.or(b).has_one() == (a.has_one() || b.has_one()),
            ModLaw::Conjunction => a.and(b).has_one() == (a.has_one() && b.has_one()),
            ModLaw::DoubleNegation => a.not().not().has_one() == a.has_one(),
            ModLaw::NegatedDisjunction => {
                a.or(b).not().has_one() == (a.not().has_one() && b.not().has_one())
            }
            ModLaw::NegatedConjunction => {
                a.and(b).not().has_one() == (a.not().has_one() || b.not().has_one())
            }
        }
    }

    /// Left and right formulas of the law instantiated at α, β.
    pub fn instantiate(self, alpha: &Formula, beta: &Formula) -> (Formula, Formula) {
        let (a, b) = (alpha.clone(), beta.clone());
        match self {
            ModLaw::Disjunction | ModLaw::Conjunction => unreachable!("set-valued right side"),
            ModLaw::DoubleNegation => (a.clone().negate().negate(), a),
            ModLaw::NegatedDisjunction => (a.clone().or(b.clone()).negate(), a.negate().and(b.negate())),
            ModLaw::NegatedConjunction => (a.clone().and(b.clone()).negate(), a.negate().or(b.negate())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// A valuation satisfying every formula.
    CommonModel { valuation: usize },
    /// A definable Γ and a formula α violating (A2).
    Undecided {
        gamma_models: ValuationSet,
        gamma: Vec<Formula>,
        alpha: Formula,
    },
    /// A pair of formulas and a valuation where a Mod law fails.
    Law {
        law: ModLaw,
        alpha: Formula,
        beta: Formula,
        valuation: usize,
    },
}

impl Counterexample {
    /// Re-evaluates the counterexample from its formulas alone, without the clone.
    pub fn recheck(&self, structure: &Structure) -> Result<bool> {
        match self {
            Counterexample::CommonModel { valuation } => {
                let v = structure.valuation(*valuation);
                Ok(structure.satisfies(&v, &Formula::falsity())?)
            }
            Counterexample::Undecided { gamma_models, gamma, alpha } => {
                let m = structure.models(gamma)?;
                let not_alpha = alpha.clone().negate();
                Ok(&m == gamma_models
                    && !structure.theory_contains(&m, alpha)?
                    && !structure.theory_contains(&m, &not_alpha)?
                    && m.intersection(&structure.models(std::slice::from_ref(alpha))?)
                        .is_subset(&structure.models(&[not_alpha])?))
            }
            Counterexample::Law { law, alpha, beta, valuation } => {
                let v = structure.valuation(*valuation);
                let sat = |f: &Formula| structure.satisfies(&v, f);
                let (lhs, rhs) = match law {
                    ModLaw::Disjunction => (
                        sat(&alpha.clone().or(beta.clone()))?,
                        sat(alpha)? || sat(beta)?,
                    ),
                    ModLaw::Conjunction => (
                        sat(&alpha.clone().and(beta.clone()))?,
                        sat(alpha)? && sat(beta)?,
                    ),
                    _ => {
                        let (l, r) = law.instantiate(alpha, beta);
                        (sat(&l)?, sat(&r)?)
                    }
                };
                Ok(lhs != rhs)
            }
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::CommonModel { valuation } => {
                write!(f, "valuation #{valuation} satisfies every formula")
            }
            Counterexample::Undecided { gamma, alpha, .. } => {
                let g: Vec<String> = gamma.iter().map(|x| x.to_string()).collect();
                write!(
                    f,
                    "Gamma={{{}}}, alpha={alpha}: neither alpha nor ~alpha follows, yet Mod(Gamma) n Mod(alpha) is inside Mod(~alpha)",
                    g.join(", ")
                )
            }
            Counterexample::Law { law, alpha, beta, valuation } => write!(
                f,
                "{} fails for a={alpha}, b={beta} at valuation #{valuation}",
                law.describe()
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails(Counterexample),
    Undecided(String),
}

impl Status {
    pub fn holds(&self) -> bool {
        matches!(self, Status::Holds)
    }
}

#[derive(Clone, Debug)]
pub struct AssumptionReport {
    pub entries: Vec<(Assumption, Status)>,
    /// Number of clone classes the class-quantified checks ranged over.
    pub classes_checked: usize,
    pub clone_complete: bool,
}

impl AssumptionReport {
    pub fn status(&self, a: Assumption) -> &Status {
        &self.entries.iter().find(|(x, _)| *x == a).expect("every assumption is reported").1
    }

    pub fn holds(&self, a: Assumption) -> bool {
        self.status(a).holds()
    }

    /// Fails with `AssumptionViolated` naming the first requirement not known to hold.
    pub fn require(&self, needed: &[Assumption]) -> Result<()> {
        match needed.iter().find(|a| !self.holds(**a)) {
            Some(a) => Err(crate::error::Error::AssumptionViolated {
                assumption: a.to_string(),
            }),
            None => Ok(()),
        }
    }
}

/// Checks (A0) to (A4) against a structure and its clone.
///
/// (A2) needs the definable family and is undecided when the clone is
/// incomplete; the class-quantified laws then range over the classes found.
pub fn check_assumptions(structure: &Structure, clone: &FormulaClone) -> AssumptionReport {
    let family = DefinableFamily::compute(clone).ok();
    build_report(structure, clone, family.as_ref())
}

impl Quotient {
    pub fn assumptions(&self) -> AssumptionReport {
        build_report(&self.structure, &self.clone, Some(&self.family))
    }
}

fn build_report(
    structure: &Structure,
    clone: &FormulaClone,
    family: Option<&DefinableFamily>,
) -> AssumptionReport {
    let a0 = check_a0(structure);
    // Every enumerated universe is finite.
    let a1 = Status::Holds;
    let a2 = match family {
        Some(family) => check_a2(structure, clone, family),
        None => Status::Undecided(format!(
            "clone enumeration incomplete after {} classes",
            clone.len()
        )),
    };
    let a3 = check_laws(structure, clone, &ModLaw::ALL);
    let a4 = check_laws(structure, clone, &[ModLaw::Disjunction]);
    AssumptionReport {
        entries: vec![
            (Assumption::A0, a0),
            (Assumption::A1, a1),
            (Assumption::A2, a2),
            (Assumption::A3, a3),
            (Assumption::A4, a4),
        ],
        classes_checked: clone.len(),
        clone_complete: clone.is_complete(),
    }
}

/// Mod(F) ⊆ Mod(false), so it is empty iff no valuation satisfies `false`.
fn check_a0(structure: &Structure) -> Status {
    let falsity = structure
        .semantic(&Formula::falsity())
        .expect("constants need no atoms");
    match falsity.truth.first() {
        Some(valuation) => Status::Fails(Counterexample::CommonModel { valuation }),
        None => Status::Holds,
    }
}

/// Γ ranges over definable sets (the universe first), α over clone classes.
fn check_a2(structure: &Structure, clone: &FormulaClone, family: &DefinableFamily) -> Status {
    let universe = family.universe_index();
    let order = std::iter::once(universe).chain((0..family.len()).filter(|&d| d != universe));
    for d in order {
        let set = family.get(d);
        for a in 0..clone.len() {
            let c = clone.class(a);
            let undecided = !set.is_subset(&c.truth) && !set.is_subset(&c.falsity);
            if undecided && set.intersection(&c.truth).is_subset(&c.falsity) {
                let quotient = Quotient::from_parts(structure.clone(), clone.clone())
                    .expect("clone is complete when the family exists");
                let gamma = quotient
                    .representative(set)
                    .expect("members of the family have representatives");
                return Status::Fails(Counterexample::Undecided {
                    gamma_models: set.clone(),
                    gamma,
                    alpha: clone.witness(a),
                });
            }
        }
    }
    Status::Holds
}

fn check_laws(structure: &Structure, clone: &FormulaClone, laws: &[ModLaw]) -> Status {
    let n = structure.universe_size();
    let values: Vec<Vec<TruthValue>> = clone
        .classes()
        .iter()
        .map(|c| (0..n).map(|v| c.value_at(v)).collect())
        .collect();
    for (a, va) in values.iter().enumerate() {
        for (b, vb) in values.iter().enumerate() {
            for v in 0..n {
                if let Some(&law) = laws.iter().find(|law| !law.holds_at(va[v], vb[v])) {
                    return Status::Fails(Counterexample::Law {
                        law,
                        alpha: clone.witness(a),
                        beta: clone.witness(b),
                        valuation: v,
                    });
                }
            }
        }
    }
    if clone.is_complete() {
        Status::Holds
    } else {
        Status::Undecided(format!("holds on the {} classes enumerated", clone.len()))
    }
}

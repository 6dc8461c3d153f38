//! Basic, pivotal, discriminative and pertinence consequence.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bitset::ValuationSet;
use crate::choice::Pivot;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::semantics::{ClassSet, FormulaClone, Quotient, SemanticFunction, Structure};

/// Γ ⊢ α iff Mod(Γ) ⊆ Mod(α).
pub fn entails_basic(structure: &Structure, gamma: &[Formula], alpha: &Formula) -> Result<bool> {
    structure.entails(gamma, alpha)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Γ |~ α iff μ(Mod Γ) ⊆ Mod(α).
    Plain,
    /// Additionally μ(Mod Γ) ⊄ Mod(¬α).
    Discriminative,
}

impl Mode {
    /// Whether a chosen set of valuations supports concluding a formula with
    /// semantic function `alpha`.
    pub fn concludes(self, chosen: &ValuationSet, alpha: &SemanticFunction) -> bool {
        chosen.is_subset(&alpha.truth)
            && (self == Mode::Plain || !chosen.is_subset(&alpha.falsity))
    }

    /// The conclusions drawn from a chosen set, as clone classes: Th(chosen)
    /// in plain mode and Th^d(chosen) in discriminative mode.
    pub fn conclusions(self, clone: &FormulaClone, chosen: &ValuationSet) -> ClassSet {
        match self {
            Mode::Plain => clone.theory(chosen),
            Mode::Discriminative => clone.theory_d(chosen),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Plain => "plain",
            Mode::Discriminative => "discriminative",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "plain" | "pivotal" => Ok(Mode::Plain),
            "discriminative" => Ok(Mode::Discriminative),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// The relation induced by a pivot: Γ |~ α iff Mod(Γ) ∩ I ⊆ Mod(α), with the
/// extra discriminative requirement Mod(Γ) ∩ I ⊄ Mod(¬α) in that mode.
#[derive(Clone, Debug)]
pub struct PivotalRelation {
    pub pivot: Pivot,
    pub mode: Mode,
}

impl PivotalRelation {
    pub fn new(pivot: Pivot, mode: Mode) -> PivotalRelation {
        PivotalRelation { pivot, mode }
    }

    pub fn entails(&self, structure: &Structure, gamma: &[Formula], alpha: &Formula) -> Result<bool> {
        let chosen = self.pivot.choose(&structure.models(gamma)?);
        Ok(self.mode.concludes(&chosen, &structure.semantic(alpha)?))
    }

    /// C|~(Γ) as a set of clone classes, for Γ given by its models.
    pub fn consequence_set(&self, quotient: &Quotient, gamma_models: &ValuationSet) -> ClassSet {
        self.mode
            .conclusions(&quotient.clone, &self.pivot.choose(gamma_models))
    }
}

pub fn entails_pivotal(structure: &Structure, pivot: &Pivot, gamma: &[Formula], alpha: &Formula) -> Result<bool> {
    PivotalRelation::new(pivot.clone(), Mode::Plain).entails(structure, gamma, alpha)
}

pub fn entails_discriminative(structure: &Structure, pivot: &Pivot, gamma: &[Formula], alpha: &Formula) -> Result<bool> {
    PivotalRelation::new(pivot.clone(), Mode::Discriminative).entails(structure, gamma, alpha)
}

/// Γ is consistent iff there is no α with both Γ ⊢ α and Γ ⊢ ¬α.
///
/// Decided formula by formula over the clone witnesses; [`Quotient::is_coherent`]
/// answers the same question on Mod(Γ) with set operations.
pub fn is_consistent(quotient: &Quotient, gamma: &[Formula]) -> Result<bool> {
    let s = &quotient.structure;
    for i in 0..quotient.clone.len() {
        let alpha = quotient.clone.witness(i);
        if entails_basic(s, gamma, &alpha)? && entails_basic(s, gamma, &alpha.negate())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The sets H_1(Γ), H_2(Γ), … and their union H(Γ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSets {
    pub stages: Vec<ClassSet>,
    pub union: ClassSet,
}

/// Builds H(Γ) for a premise with models `gamma_models` and conclusions `k`.
///
/// Stage i collects ¬β for every β that follows from Γ, the conclusions and
/// the earlier stages, is not itself concluded, and whose negation does not
/// follow as well. Iteration stops at the first stage adding no new class,
/// after which every further stage would repeat it.
pub fn h_sets(clone: &FormulaClone, gamma_models: &ValuationSet, k: &ClassSet) -> HSets {
    let mut base = gamma_models.intersection(&clone.models_of(k));
    let mut union = clone.empty_classes();
    let mut stages = Vec::new();
    loop {
        let mut stage = clone.empty_classes();
        for b in 0..clone.len() {
            let c = clone.class(b);
            if !k.contains(b) && base.is_subset(&c.truth) && !base.is_subset(&c.falsity) {
                stage.insert(clone.negation(b));
            }
        }
        let fresh = stage.difference(&union);
        stages.push(stage);
        if fresh.is_empty() {
            return HSets { stages, union };
        }
        for h in fresh.iter() {
            base.intersect_with(clone.models(h));
        }
        union.union_with(&fresh);
    }
}

/// A pertinence relation: Γ |~ α iff every member of E that follows from
/// Γ ∪ {α} already follows from Γ.
#[derive(Clone, Debug)]
pub struct PertinenceRelation {
    /// Mod({e}) for each member e of E.
    members: Vec<ValuationSet>,
    /// Whether E is closed under ⊢, when known.
    closed: Option<bool>,
}

impl PertinenceRelation {
    /// E given as a set of clone classes; closedness is decided against the clone.
    pub fn from_classes(quotient: &Quotient, e: &ClassSet) -> PertinenceRelation {
        let clone = &quotient.clone;
        let closed = &clone.theory(&clone.models_of(e)) == e;
        PertinenceRelation {
            members: e.iter().map(|i| clone.models(i).clone()).collect(),
            closed: Some(closed),
        }
    }

    /// E given as explicit formulas. Closedness cannot be decided without a
    /// clone, so it is left unknown.
    pub fn from_formulas(structure: &Structure, e: &[Formula]) -> Result<PertinenceRelation> {
        let members = e
            .iter()
            .map(|f| Ok(structure.semantic(f)?.truth))
            .collect::<Result<_>>()?;
        Ok(PertinenceRelation { members, closed: None })
    }

    pub fn closed(&self) -> Option<bool> {
        self.closed
    }

    /// The verdict for Γ, α given by their models.
    pub fn concludes(&self, gamma_models: &ValuationSet, alpha_models: &ValuationSet) -> bool {
        let joint = gamma_models.intersection(alpha_models);
        self.members
            .iter()
            .all(|m| !joint.is_subset(m) || gamma_models.is_subset(m))
    }

    pub fn entails(&self, structure: &Structure, gamma: &[Formula], alpha: &Formula) -> Result<bool> {
        Ok(self.concludes(&structure.models(gamma)?, &structure.semantic(alpha)?.truth))
    }
}

//! The finite quotient of the formula space: every semantic function that
//! some formula realizes over a structure, with a witness formula for each.

use std::collections::HashMap;

use crate::bitset::{BitSet, ValuationSet};
use crate::error::{Error, Result};
use crate::formula::Formula;

use super::structure::{SemanticFunction, Structure};

/// Default bound on the number of classes enumerated before giving up.
pub const DEFAULT_CLONE_CAP: usize = 200_000;

/// How a class was first reached during closure; used to rebuild witnesses.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Derivation {
    Const(bool),
    Atom(usize),
    Not(usize),
    Or(usize, usize),
    And(usize, usize),
}

/// A set of clone classes, indexed like the clone they belong to.
pub type ClassSet = BitSet;

/// The set of semantic functions realizable by formulas over a structure.
///
/// Classes are numbered in discovery order, which is deterministic: constants
/// first (`true`, `false`), then atoms in declaration order, then closure rounds.
#[derive(Clone, Debug)]
pub struct FormulaClone {
    classes: Vec<SemanticFunction>,
    derivations: Vec<Derivation>,
    lookup: HashMap<SemanticFunction, usize>,
    negation: Vec<usize>,
    complete: bool,
    cap: usize,
    universe: usize,
    atom_names: Vec<String>,
    /// Number of functions from the universe into the value domain; once
    /// that many classes exist nothing new can appear.
    max_classes: Option<usize>,
    saturated: bool,
}

impl FormulaClone {
    /// Closes the constants and atom projections under ¬, ∨ and ∧.
    ///
    /// Each round negates every frontier class and combines it with every
    /// class known at the start of the round, so every pair is tried once the
    /// frontier is empty. Stops early, flagging the result incomplete, when
    /// more than `cap` classes appear.
    pub fn compute(structure: &Structure, cap: usize) -> FormulaClone {
        let universe = structure.universe_size();
        let mut clone = FormulaClone {
            classes: Vec::new(),
            derivations: Vec::new(),
            lookup: HashMap::new(),
            negation: Vec::new(),
            complete: true,
            cap,
            universe,
            atom_names: structure.atoms().names().to_vec(),
            max_classes: (structure.kind().domain().len() as u128)
                .checked_pow(universe as u32)
                .and_then(|m| usize::try_from(m).ok()),
            saturated: false,
        };
        let seeds = [true, false]
            .into_iter()
            .map(|b| (SemanticFunction::constant(universe, b), Derivation::Const(b)))
            .chain(
                (0..structure.atoms().len())
                    .map(|a| (structure.projection(a).clone(), Derivation::Atom(a))),
            );
        for (sem, how) in seeds {
            if !clone.add(sem, how) {
                return clone;
            }
        }

        let mut frontier_start = 0;
        while frontier_start < clone.classes.len() && !clone.saturated {
            let known = clone.classes.len();
            for i in frontier_start..known {
                if clone.saturated {
                    break;
                }
                let neg = clone.classes[i].negate();
                if !clone.add(neg, Derivation::Not(i)) {
                    return clone;
                }
                for j in 0..known {
                    if clone.saturated {
                        break;
                    }
                    let or = clone.classes[i].or(&clone.classes[j]);
                    if !clone.add(or, Derivation::Or(i, j)) {
                        return clone;
                    }
                    let and = clone.classes[i].and(&clone.classes[j]);
                    if !clone.add(and, Derivation::And(i, j)) {
                        return clone;
                    }
                }
            }
            frontier_start = known;
        }

        clone.negation = (0..clone.classes.len())
            .map(|i| clone.lookup[&clone.classes[i].negate()])
            .collect();
        clone
    }

    /// Inserts a class if new. Returns false once the cap is exceeded.
    fn add(&mut self, sem: SemanticFunction, how: Derivation) -> bool {
        if self.lookup.contains_key(&sem) {
            return true;
        }
        if self.saturated {
            return true;
        }
        if self.classes.len() >= self.cap {
            self.complete = false;
            return false;
        }
        self.lookup.insert(sem.clone(), self.classes.len());
        self.classes.push(sem);
        self.derivations.push(how);
        self.saturated = self.max_classes == Some(self.classes.len());
        true
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Fails with `IncompleteClone` unless the closure finished.
    pub fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::IncompleteClone {
                classes: self.classes.len(),
                cap: self.cap,
            })
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn class(&self, i: usize) -> &SemanticFunction {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[SemanticFunction] {
        &self.classes
    }

    /// Mod of class `i`.
    pub fn models(&self, i: usize) -> &ValuationSet {
        &self.classes[i].truth
    }

    /// Index of the class of ¬α for α in class `i`. Only available on complete clones.
    pub fn negation(&self, i: usize) -> usize {
        self.negation[i]
    }

    /// A formula realizing class `i`.
    pub fn witness(&self, i: usize) -> Formula {
        match self.derivations[i] {
            Derivation::Const(b) => Formula::Const(b),
            Derivation::Atom(a) => Formula::Atom(self.atom_names[a].clone()),
            Derivation::Not(a) => Formula::negate(self.witness(a)),
            Derivation::Or(a, b) => Formula::or(self.witness(a), self.witness(b)),
            Derivation::And(a, b) => Formula::and(self.witness(a), self.witness(b)),
        }
    }

    pub fn class_of(&self, sem: &SemanticFunction) -> Option<usize> {
        self.lookup.get(sem).copied()
    }

    /// Class of a formula, computed through the structure's semantics.
    pub fn classify(&self, structure: &Structure, f: &Formula) -> Result<usize> {
        let sem = structure.semantic(f)?;
        self.class_of(&sem).ok_or_else(|| Error::IncompleteClone {
            classes: self.classes.len(),
            cap: self.cap,
        })
    }

    pub fn empty_classes(&self) -> ClassSet {
        ClassSet::empty(self.classes.len())
    }

    pub fn all_classes(&self) -> ClassSet {
        ClassSet::full(self.classes.len())
    }

    /// Th(V) as a set of classes: those whose models include V.
    pub fn theory(&self, set: &ValuationSet) -> ClassSet {
        ClassSet::from_indices(
            self.classes.len(),
            (0..self.classes.len()).filter(|&i| set.is_subset(&self.classes[i].truth)),
        )
    }

    /// Th^d(V): classes α with V ⊆ Mod(α) and V ⊄ Mod(¬α).
    pub fn theory_d(&self, set: &ValuationSet) -> ClassSet {
        ClassSet::from_indices(
            self.classes.len(),
            (0..self.classes.len()).filter(|&i| {
                let c = &self.classes[i];
                set.is_subset(&c.truth) && !set.is_subset(&c.falsity)
            }),
        )
    }

    /// Mod of a set of classes: intersection of their models.
    pub fn models_of(&self, classes: &ClassSet) -> ValuationSet {
        let mut out = ValuationSet::full(self.universe);
        for i in classes.iter() {
            out.intersect_with(&self.classes[i].truth);
        }
        out
    }

    /// Membership in the coherent family C: no class α has V ⊆ Mod(α) ∩ Mod(¬α).
    pub fn is_coherent(&self, set: &ValuationSet) -> bool {
        !self
            .classes
            .iter()
            .any(|c| set.is_subset(&c.truth) && set.is_subset(&c.falsity))
    }
}

use std::collections::{BTreeSet, HashMap};

use crate::bitset::ValuationSet;
use crate::error::{Error, Result};
use crate::formula::Formula;

use super::clone::{ClassSet, FormulaClone};
use super::structure::Structure;

/// The definable family D = {Mod(Γ) : Γ a set of formulas}, in canonical order.
#[derive(Clone, Debug)]
pub struct DefinableFamily {
    sets: Vec<ValuationSet>,
    index: HashMap<ValuationSet, usize>,
    universe: usize,
}

impl DefinableFamily {
    /// Closes the class models and the full universe under intersection.
    ///
    /// Every Mod(Γ) is an intersection of class models, so intersecting each
    /// new set with every generator reaches the whole family.
    pub fn compute(clone: &FormulaClone) -> Result<DefinableFamily> {
        clone.require_complete()?;
        let universe = clone.universe_size();
        let max = 1u128
            .checked_shl(universe as u32)
            .unwrap_or(u128::MAX);
        let generators: Vec<ValuationSet> = clone
            .classes()
            .iter()
            .map(|c| c.truth.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        let mut found: BTreeSet<ValuationSet> = generators.iter().cloned().collect();
        found.insert(ValuationSet::full(universe));
        let mut work: Vec<ValuationSet> = found.iter().cloned().collect();
        while let Some(set) = work.pop() {
            if found.len() as u128 == max {
                break;
            }
            for g in &generators {
                let meet = set.intersection(g);
                if !found.contains(&meet) {
                    found.insert(meet.clone());
                    work.push(meet);
                }
            }
            if found.len() > clone.cap() {
                return Err(Error::CapExceeded {
                    what: "definable family".into(),
                    limit: clone.cap() as u64,
                });
            }
        }

        let sets: Vec<ValuationSet> = found.into_iter().collect();
        let index = sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(DefinableFamily { sets, index, universe })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[ValuationSet] {
        &self.sets
    }

    pub fn get(&self, i: usize) -> &ValuationSet {
        &self.sets[i]
    }

    pub fn contains(&self, set: &ValuationSet) -> bool {
        self.index.contains_key(set)
    }

    pub fn index_of(&self, set: &ValuationSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn universe_index(&self) -> usize {
        self.index[&ValuationSet::full(self.universe)]
    }
}

/// A structure with its complete clone and definable family: everything
/// needed to quantify over formulas and definable sets by enumeration.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub structure: Structure,
    pub clone: FormulaClone,
    pub family: DefinableFamily,
    coherent: Vec<bool>,
}

impl Quotient {
    pub fn new(structure: Structure, clone_cap: usize) -> Result<Quotient> {
        let clone = FormulaClone::compute(&structure, clone_cap);
        Quotient::from_parts(structure, clone)
    }

    pub fn from_parts(structure: Structure, clone: FormulaClone) -> Result<Quotient> {
        let family = DefinableFamily::compute(&clone)?;
        let coherent = family.sets().iter().map(|s| clone.is_coherent(s)).collect();
        Ok(Quotient {
            structure,
            clone,
            family,
            coherent,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.structure.universe_size()
    }

    /// Whether the definable set with index `d` is coherent.
    pub fn is_coherent_index(&self, d: usize) -> bool {
        self.coherent[d]
    }

    pub fn is_coherent(&self, set: &ValuationSet) -> bool {
        match self.family.index_of(set) {
            Some(d) => self.coherent[d],
            None => self.clone.is_coherent(set),
        }
    }

    /// A small formula set Γ with Mod(Γ) = `set`, for a definable `set`.
    ///
    /// Uses ∅ for the universe, a single witness when one class has exactly
    /// these models, and otherwise greedily intersects class models.
    pub fn representative(&self, set: &ValuationSet) -> Option<Vec<Formula>> {
        if set.is_full() {
            return Some(Vec::new());
        }
        let n = self.clone.len();
        if let Some(i) = (0..n).find(|&i| self.clone.models(i) == set) {
            return Some(vec![self.clone.witness(i)]);
        }
        let mut current = self.structure.universe();
        let mut chosen = Vec::new();
        for i in 0..n {
            let m = self.clone.models(i);
            if set.is_subset(m) && !current.is_subset(m) {
                current.intersect_with(m);
                chosen.push(self.clone.witness(i));
                if &current == set {
                    return Some(chosen);
                }
            }
        }
        None
    }

    /// Renders a definable set as a comma-separated formula list.
    pub fn describe_set(&self, set: &ValuationSet) -> String {
        match self.representative(set) {
            Some(gamma) if gamma.is_empty() => "{}".into(),
            Some(gamma) => format!(
                "{{{}}}",
                gamma.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
            ),
            None => format!("<undefinable {set}>"),
        }
    }

    /// Renders a class set by its witnesses.
    pub fn describe_classes(&self, classes: &ClassSet) -> String {
        format!(
            "{{{}}}",
            classes
                .iter()
                .map(|i| self.clone.witness(i).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }

    /// Class index of a formula.
    pub fn classify(&self, f: &Formula) -> Result<usize> {
        self.clone.classify(&self.structure, f)
    }

    /// Classes of a finite formula set.
    pub fn classify_all(&self, gamma: &[Formula]) -> Result<ClassSet> {
        let mut out = self.clone.empty_classes();
        for f in gamma {
            out.insert(self.classify(f)?);
        }
        Ok(out)
    }
}
